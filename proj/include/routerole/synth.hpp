#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "routerole/as_graph.hpp"
#include "routerole/monitor.hpp"
#include "routerole/perturb.hpp"
#include "routerole/validator.hpp"

namespace routerole {

// Knobs for the synthetic internet. Defaults give a 124-AS topology with a
// clear three-tier hierarchy plus a six-hour replay with ten injected
// incidents on top of steady legitimate churn.
struct SynthSpec {
    uint32_t tier1_count = 4;
    uint32_t mid_count = 20;
    uint32_t stub_count = 100;
    uint32_t multihomed_percent = 40; // stubs with a second provider
    uint32_t sibling_pairs = 4;       // same-org stub pairs (MOAS churn)
    double extra_peering = 0.25;      // chance of extra same-layer mid peering
    uint64_t seed = 42;

    int64_t start_t = 1700000000;
    int64_t duration_s = 21600;
    uint64_t target_announcements = 110000;
    uint32_t anomaly_count = 10;
    int64_t first_anomaly_s = 9000;
    int64_t anomaly_spacing_s = 900;
    int64_t anomaly_duration_s = 120;
};

enum class AnomalyKind : uint8_t {
    prefix_hijack,    // actor originates the victim's exact prefix
    subprefix_hijack, // actor originates a more specific prefix
    path_hijack,      // actor announces the prefix with a forged origin hop
    route_leak,       // a mid re-exports a provider route to another provider
};

const char* to_string(AnomalyKind k);

struct InjectedAnomaly {
    uint32_t id = 0;
    AnomalyKind kind{};
    Asn actor = 0;  // hijacker or leaker
    Asn victim = 0; // origin of the victim prefix
    IpPrefix victim_prefix;
    IpPrefix announced_prefix; // differs from victim_prefix for subprefix kinds
    int64_t t_start = 0;
    int64_t t_end = 0;
    uint32_t impact_vantages = 0; // vantages whose route changes at onset
    std::vector<uint64_t> announcement_indices;
};

struct SynthTopology {
    SynthSpec spec;
    std::vector<RelationshipRecord> records;
    AsGraph graph;
    std::vector<Asn> tier1, mids, stubs;
    std::map<Asn, std::vector<Asn>> providers_of, customers_of, peers_of;
    std::map<Asn, IpPrefix> origin_prefix; // every AS originates one prefix
    std::map<Asn, std::string> org_of;
    std::vector<RoaEntry> roas;
    std::vector<Asn> vantages;
    std::vector<std::pair<Asn, Asn>> siblings; // same-org stub pairs
    // the one sibling pair whose secondary origin has no ROA
    std::optional<std::pair<Asn, Asn>> misconfigured_pair;
};

SynthTopology generate_topology(const SynthSpec& spec);

// Best route per AS for the given origin seeds under standard export rules:
// routes learned from customers (and self-originated prefixes) are exported
// everywhere, routes learned from peers or providers only to customers.
// Preference: customer > peer > provider, then shortest path, then lowest
// next-hop ASN. A seed is (AS, initial path); a plain origin seeds (o, {o}).
struct RouteSeed {
    Asn at = 0;
    AsPath path; // path[0] == at
};
// excluded blocks one provider-customer link (provider, customer) in both
// export directions, used to simulate link failure.
std::map<Asn, AsPath> propagate_routes(const SynthTopology& topo,
                                       const std::vector<RouteSeed>& seeds,
                                       std::optional<std::pair<Asn, Asn>> excluded = std::nullopt);

// Per-link usage counts over every AS's best path toward every prefix.
RouteUsage baseline_route_usage(const SynthTopology& topo);

// Vantage RIB for all origin prefixes.
std::map<Asn, std::map<IpPrefix, AsPath>> baseline_rib(const SynthTopology& topo);

// Streamed replay generation: announcement callbacks fire in strict

// (t, t_us) order; anomaly_id is 0 for churn and the anomaly's id for
// injected (and recovery) announcements.
using AnnouncementSink = std::function<void(const Announcement&, uint32_t anomaly_id)>;

struct ReplaySummary {
    uint64_t announcements = 0;
    uint64_t churn_events = 0;
    std::vector<InjectedAnomaly> anomalies;
};

ReplaySummary generate_replay(const SynthTopology& topo, const AnnouncementSink& sink);

// Writes the complete dataset (relationships, rib, replay, truth sidecar,
// roa csv, org tsv, route usage) into a directory.
struct DatasetPaths {
    std::string relationships, rib, replay, truth, roa, orgs, route_usage;
};
DatasetPaths write_dataset(const SynthTopology& topo, const std::string& dir);

} // namespace routerole
