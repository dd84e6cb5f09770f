#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "routerole/as_graph.hpp"
#include "routerole/detector.hpp"
#include "routerole/prefix.hpp"
#include "routerole/prefix_trie.hpp"

namespace routerole {

// --- RPKI route-origin validation ------------------------------------------

enum class RpkiState : uint8_t {
    not_found,      // no ROA covers the prefix
    valid,          // a covering ROA authorizes the origin at this length
    invalid_length, // the origin holds a covering ROA but announced too long
    invalid_asn,    // covered, but no covering ROA names this origin
};

const char* to_string(RpkiState s);

struct RoaEntry {
    IpPrefix prefix;
    uint8_t max_length = 0;
    Asn asn = 0;
};

class RoaTable {
public:
    // CSV rows "prefix,max_length,asn"; '#' comments and a header row are
    // tolerated, the ASN may carry an "AS" prefix.
    static RoaTable load_csv(const std::string& path);

    void add(const RoaEntry& entry);
    RpkiState validate(const IpPrefix& prefix, Asn origin) const;
    size_t size() const { return size_; }

private:
    PrefixTrie<std::vector<RoaEntry>> trie_;
    size_t size_ = 0;
};

// --- organization data -------------------------------------------------------

class OrgTable {
public:
    // TSV rows "asn<TAB>org_id"; extra columns ignored.
    static OrgTable load_tsv(const std::string& path);

    void set(Asn asn, std::string org);
    std::optional<std::string> org_of(Asn asn) const;
    // True only when both ASNs have a known, equal organization.
    bool same_org(Asn a, Asn b) const;
    size_t size() const { return map_.size(); }

private:
    std::map<Asn, std::string> map_;
};

// --- path plausibility --------------------------------------------------------

enum class ValleyVerdict : uint8_t {
    ok,
    violation,     // the walk ascends again after peering or descending
    not_evaluable, // an adjacent pair has no relationship record
};

const char* to_string(ValleyVerdict v);

// Checks the export chain along a path stored vantage-first: walking from
// the origin toward the vantage there may be any run of customer-to-provider
// hops, then at most one peer hop, then only provider-to-customer hops.
// Consecutive duplicate ASNs are skipped. Any hop between ASes with no
// relationship record makes the whole path not evaluable.
ValleyVerdict valley_free(const AsPath& path_vantage_first, const AsGraph& graph);

// --- change-level patterns ---------------------------------------------------

// Explanations an alarm's route changes are tested against:
//   origin_hijack     different-org origins, one RPKI-valid and one whose
//                     announcement no ROA authorizes
//   route_leak        a path violating valley-freeness
//   path_manipulation a reserved ASN or a hop with no relationship record
//   roa_misconfig     same-org origins disagreeing with their ROAs
struct PatternMatch {
    bool origin_hijack = false;     // P1
    bool route_leak = false;        // P2
    bool path_manipulation = false; // P3
    bool roa_misconfig = false;     // P4

    RpkiState new_state = RpkiState::not_found;
    RpkiState old_state = RpkiState::not_found;
    ValleyVerdict new_valley = ValleyVerdict::ok;
    ValleyVerdict old_valley = ValleyVerdict::ok;

    bool any() const { return origin_hijack || route_leak || path_manipulation || roa_misconfig; }
};

PatternMatch match_patterns(const RouteChange& change, const RoaTable& roas, const OrgTable& orgs,
                            const AsGraph& graph);

// Per-alarm explanation rates: the fraction of member changes matching each
// pattern. An alarm is high confidence when some pattern explains a strict
// majority of its changes.
struct AlarmValidation {
    std::array<uint32_t, 4> counts{};
    uint32_t total_changes = 0;
    bool high_confidence = false;
    int dominant = -1; // index into counts of the best pattern, -1 if none matched

    double rate(size_t i) const {
        return total_changes ? static_cast<double>(counts[i]) / total_changes : 0.0;
    }
};

AlarmValidation classify_alarm(const Alarm& alarm, const RoaTable& roas, const OrgTable& orgs,
                               const AsGraph& graph);

// Benign origin change: both origins in one organization (MOAS inside one
// operator) and neither path shows tampering (no repeated ASN anywhere).
bool label_legitimate(const RouteChange& change, const OrgTable& orgs);

} // namespace routerole
