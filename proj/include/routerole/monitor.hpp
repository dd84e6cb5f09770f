#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "routerole/asn.hpp"
#include "routerole/path_diff.hpp"
#include "routerole/prefix.hpp"
#include "routerole/prefix_trie.hpp"

namespace routerole {

struct MalformedAnnouncement : Error {
    using Error::Error;
};

enum class AnnKind : uint8_t { announce, withdraw };

struct Announcement {
    uint64_t index = 0; // position in the replay stream
    int64_t t = 0;      // unix seconds
    uint32_t t_us = 0;  // microsecond part
    Asn vantage = 0;
    AnnKind kind = AnnKind::announce;
    IpPrefix prefix;
    RawPath path; // empty for withdrawals
};

// One observed conflict: `vantage` had `old_path` for `conflicting` and now
// announces `new_path` for `announced`. The two prefixes are equal for an
// exact-entry conflict; for a fresh more-specific announcement `conflicting`
// is the nearest covering prefix that had a route.
struct RouteChange {
    uint64_t seq = 0;       // ordinal among emitted changes
    uint64_t ann_index = 0; // announcement that triggered the change
    int64_t t = 0;
    uint32_t t_us = 0;
    Asn vantage = 0;
    IpPrefix announced;
    IpPrefix conflicting;
    AsPath old_path;
    AsPath new_path;
};

inline int64_t to_usec(int64_t t, uint32_t t_us) { return t * 1000000 + t_us; }

// Tracks per-vantage routing tables and turns announcements that disagree
// with the table into route changes.
//
// Rules, in order: default routes are ignored; withdrawals remove the exact
// entry and never emit a change; an announcement is compared against the
// exact table entry when one exists, otherwise against the nearest covering
// entry; equal paths (after prepend collapsing) emit nothing. The announced
// path is stored afterwards either way.
class RoutingMonitor {
public:
    struct Options {
        bool collapse_prepend = true;
    };
    struct Stats {
        uint64_t announcements = 0;
        uint64_t withdrawals = 0;
        uint64_t changes = 0;
        uint64_t default_routes_ignored = 0;
        uint64_t rib_entries = 0;
        uint64_t rib_duplicates = 0;
    };

    RoutingMonitor() = default;
    explicit RoutingMonitor(Options options) : options_(options) {}

    // Loads one RIB entry. Duplicate (vantage, prefix) pairs are counted and
    // the later entry wins.
    void seed_rib_entry(Asn vantage, const IpPrefix& prefix, const RawPath& path);

    // Throws MalformedAnnouncement for empty paths / AS_SET announcements.
    std::optional<RouteChange> apply(const Announcement& ann);

    const Stats& stats() const { return stats_; }
    size_t table_size(Asn vantage) const;

private:
    Options options_;
    Stats stats_;
    uint64_t next_seq_ = 0;
    std::map<Asn, PrefixTrie<AsPath>> tables_;
};

} // namespace routerole
