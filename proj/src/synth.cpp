#include "routerole/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "routerole/replay.hpp"
#include "routerole/rng.hpp"

namespace routerole {

const char* to_string(AnomalyKind k) {
    switch (k) {
    case AnomalyKind::prefix_hijack: return "prefix_hijack";
    case AnomalyKind::subprefix_hijack: return "subprefix_hijack";
    case AnomalyKind::path_hijack: return "path_hijack";
    case AnomalyKind::route_leak: return "route_leak";
    }
    return "?";
}

namespace {

IpPrefix nth_prefix(uint32_t i) {
    // i is 1-based; the whole default topology fits under 10.0.0.0/8
    return IpPrefix::parse("10." + std::to_string(i) + ".0.0/16");
}

void add_rel(std::vector<RelationshipRecord>& recs, Asn u, Asn v, Relationship rel) {
    recs.push_back({u, v, rel});
}

} // namespace

SynthTopology generate_topology(const SynthSpec& spec) {
    if (spec.tier1_count < 3 || spec.mid_count < 10 || spec.stub_count < 20)
        throw ConfigError("synthetic topology needs at least 3 tier1, 10 mid and 20 stub ASes");

    SynthTopology topo;
    topo.spec = spec;

    for (uint32_t i = 0; i < spec.tier1_count; ++i) topo.tier1.push_back(101 + i);
    for (uint32_t i = 0; i < spec.mid_count; ++i) topo.mids.push_back(201 + i);
    for (uint32_t i = 0; i < spec.stub_count; ++i) topo.stubs.push_back(301 + i);

    // Three mid sublayers. L1 hangs off the tier1s, L2 off L1, L3 off L2,
    // giving provider chains up to four hops deep once stubs attach.
    uint32_t n1 = (spec.mid_count + 2) / 3;
    uint32_t n2 = (spec.mid_count - n1 + 1) / 2;
    std::vector<Asn> l1(topo.mids.begin(), topo.mids.begin() + n1);
    std::vector<Asn> l2(topo.mids.begin() + n1, topo.mids.begin() + n1 + n2);
    std::vector<Asn> l3(topo.mids.begin() + n1 + n2, topo.mids.end());

    auto& recs = topo.records;
    for (size_t i = 0; i < topo.tier1.size(); ++i)
        for (size_t j = i + 1; j < topo.tier1.size(); ++j)
            add_rel(recs, topo.tier1[i], topo.tier1[j], Relationship::p2p);

    // One branch is kept as a pure chain tier1[0] -> l1[0] -> l2[0] -> l3[0]
    // so that exactly one vantage prefers it; l3[0] and l3[1] are the two
    // providers every multihomed stub fails over between, and they sit in
    // separate branches so failovers swap a whole chain of hops.
    add_rel(recs, topo.tier1[0], l1[0], Relationship::p2c);
    for (size_t i = 1; i < l1.size(); ++i) {
        add_rel(recs, topo.tier1[1 + (i - 1) % (spec.tier1_count - 1)], l1[i], Relationship::p2c);
        add_rel(recs, topo.tier1[1 + i % (spec.tier1_count - 1)], l1[i], Relationship::p2c);
    }
    add_rel(recs, l1[0], l2[0], Relationship::p2c);
    for (size_t i = 1; i < l2.size(); ++i) {
        add_rel(recs, l1[1 + (i - 1) % (n1 - 1)], l2[i], Relationship::p2c);
        add_rel(recs, l1[1 + (i + 1) % (n1 - 1)], l2[i], Relationship::p2c);
    }
    add_rel(recs, l2[0], l3[0], Relationship::p2c);
    add_rel(recs, l2[1], l3[1], Relationship::p2c);
    add_rel(recs, l2[2 % n2], l3[1], Relationship::p2c);
    for (size_t i = 2; i < l3.size(); ++i) {
        add_rel(recs, l2[1 + (i - 1) % (n2 - 1)], l3[i], Relationship::p2c);
        add_rel(recs, l2[1 + (i + 1) % (n2 - 1)], l3[i], Relationship::p2c);
    }

    // Lateral peering inside each sublayer: adjacent pairs always, plus seeded
    // extras. The first member of each sublayer is the failover chain
    // (l1[0] -> l2[0] -> l3[0]) and gets no lateral links at all; a peer of a
    // chain AS would re-export the chain's customer routes sideways and stub
    // failovers would ripple beyond the one vantage that owns the chain.
    Rng rng(spec.seed);
    auto peer_layer = [&](const std::vector<Asn>& layer, size_t first_pair) {
        for (size_t i = first_pair; i + 1 < layer.size(); ++i)
            add_rel(recs, layer[i], layer[i + 1], Relationship::p2p);
        for (size_t i = first_pair; i < layer.size(); ++i)
            for (size_t j = i + 2; j < layer.size(); ++j)
                if (rng.unit() < spec.extra_peering)
                    add_rel(recs, layer[i], layer[j], Relationship::p2p);
    };
    peer_layer(l1, 1);
    peer_layer(l2, 1);
    peer_layer(l3, 1);

    Asn flip_a = l3[0], flip_b = l3[1];
    std::vector<Asn> single_pool;
    for (size_t i = 1; i < l2.size(); ++i) single_pool.push_back(l2[i]);
    for (size_t i = 2; i < l3.size(); ++i) single_pool.push_back(l3[i]);

    // Stub attachment. Multihomed stubs all share the (flip_a, flip_b)
    // provider pair; the rest round-robin over the remaining mids. Sibling
    // pairs are carved out of the single-homed tail and forced onto one
    // shared provider so origin swaps between them look like tiny changes.
    uint32_t pct = std::min<uint32_t>(spec.multihomed_percent, 80);
    std::vector<Asn> multihomed, singles;
    for (uint32_t i = 0; i < spec.stub_count; ++i) {
        Asn s = topo.stubs[i];
        bool multi = ((i + 1) * pct / 100) > (i * pct / 100);
        if (multi)
            multihomed.push_back(s);
        else
            singles.push_back(s);
    }
    uint32_t pairs = std::min<uint32_t>(spec.sibling_pairs, uint32_t(singles.size() / 4));
    std::vector<std::pair<Asn, Asn>> sibs;
    for (uint32_t k = 0; k < pairs; ++k) {
        Asn a = singles[singles.size() - 2 * pairs + 2 * k];
        Asn b = singles[singles.size() - 2 * pairs + 2 * k + 1];
        sibs.push_back({a, b});
    }
    singles.resize(singles.size() - 2 * pairs);

    for (Asn s : multihomed) {
        add_rel(recs, flip_a, s, Relationship::p2c);
        add_rel(recs, flip_b, s, Relationship::p2c);
    }
    for (size_t i = 0; i < singles.size(); ++i)
        add_rel(recs, single_pool[i % single_pool.size()], singles[i], Relationship::p2c);
    for (uint32_t k = 0; k < pairs; ++k) {
        Asn prov = single_pool[k % single_pool.size()];
        add_rel(recs, prov, sibs[k].first, Relationship::p2c);
        add_rel(recs, prov, sibs[k].second, Relationship::p2c);
    }
    topo.siblings = sibs;
    if (!sibs.empty()) topo.misconfigured_pair = sibs.back();

    topo.graph = build_graph(recs);
    for (const auto& r : recs) {
        switch (r.rel) {
        case Relationship::p2c:
            topo.providers_of[r.v].push_back(r.u);
            topo.customers_of[r.u].push_back(r.v);
            break;
        case Relationship::c2p:
            topo.providers_of[r.u].push_back(r.v);
            topo.customers_of[r.v].push_back(r.u);
            break;
        case Relationship::p2p:
            topo.peers_of[r.u].push_back(r.v);
            topo.peers_of[r.v].push_back(r.u);
            break;
        }
    }
    for (auto* m : {&topo.providers_of, &topo.customers_of, &topo.peers_of})
        for (auto& [asn, vec] : *m) {
            (void)asn;
            std::sort(vec.begin(), vec.end());
            vec.erase(std::unique(vec.begin(), vec.end()), vec.end());
        }

    uint32_t idx = 1;
    for (Asn as : topo.graph.asns()) topo.origin_prefix[as] = nth_prefix(idx++);

    for (Asn as : topo.graph.asns()) topo.org_of[as] = "org-" + std::to_string(as);
    for (uint32_t k = 0; k < pairs; ++k) {
        std::string org = "sibling-org-" + std::to_string(k + 1);
        topo.org_of[sibs[k].first] = org;
        topo.org_of[sibs[k].second] = org;
    }

    for (Asn as : topo.graph.asns())
        topo.roas.push_back({topo.origin_prefix.at(as), 16, as});
    for (uint32_t k = 0; k < pairs; ++k) {
        if (topo.misconfigured_pair && sibs[k] == *topo.misconfigured_pair)
            continue; // the secondary origin of this pair never got a ROA
        topo.roas.push_back({topo.origin_prefix.at(sibs[k].first), 16, sibs[k].second});
    }

    // Vantages: every tier1 plus a spread of mids, keeping the pure-chain
    // branch unmonitored so failovers are visible from exactly one vantage.
    topo.vantages = topo.tier1;
    std::vector<Asn> vm;
    for (size_t i = 1; i < l1.size(); i += 2) vm.push_back(l1[i]);
    for (size_t i = 1; i < l2.size(); i += 2) vm.push_back(l2[i]);
    if (l3.size() > 2) vm.push_back(l3.back());
    for (size_t i = 0; i < vm.size() && i < 7; ++i) topo.vantages.push_back(vm[i]);
    std::sort(topo.vantages.begin(), topo.vantages.end());
    return topo;
}

namespace {

struct Candidate {
    int cls = 3; // 0 customer route, 1 peer, 2 provider; 3 = none
    AsPath path;
};

bool candidate_better(const Candidate& a, const Candidate& b) {
    if (a.cls != b.cls) return a.cls < b.cls;
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    Asn na = a.path.size() > 1 ? a.path[1] : 0;
    Asn nb = b.path.size() > 1 ? b.path[1] : 0;
    if (na != nb) return na < nb;
    return a.path < b.path;
}

bool path_contains(const AsPath& p, Asn as) {
    return std::find(p.begin(), p.end(), as) != p.end();
}

AsPath prepended(Asn head, const AsPath& rest) {
    AsPath p;
    p.reserve(rest.size() + 1);
    p.push_back(head);
    p.insert(p.end(), rest.begin(), rest.end());
    return p;
}

} // namespace

std::map<Asn, AsPath> propagate_routes(const SynthTopology& topo,
                                       const std::vector<RouteSeed>& seeds,
                                       std::optional<std::pair<Asn, Asn>> excluded) {
    std::map<Asn, Candidate> best;
    auto blocked = [&](Asn provider, Asn customer) {
        return excluded && excluded->first == provider && excluded->second == customer;
    };
    auto improve = [&](Asn at, Candidate cand) {
        auto& cur = best[at];
        if (candidate_better(cand, cur)) {
            cur = std::move(cand);
            return true;
        }
        return false;
    };
    auto neighbors = [&](const std::map<Asn, std::vector<Asn>>& m, Asn as) {
        static const std::vector<Asn> none;
        auto it = m.find(as);
        return it == m.end() ? std::cref(none) : std::cref(it->second);
    };

    std::set<Asn> work;
    for (const auto& seed : seeds) {
        if (seed.path.empty() || seed.path.front() != seed.at)
            throw ConfigError("route seed path must start at the seeded AS");
        if (improve(seed.at, {0, seed.path})) work.insert(seed.at);
    }

    // Customer routes climb provider links first; each hop re-exports only
    // what it prefers, so the usual no-valley economics fall out naturally.
    while (!work.empty()) {
        Asn as = *work.begin();
        work.erase(work.begin());
        Candidate cur = best[as];
        if (cur.cls != 0) continue;
        for (Asn p : neighbors(topo.providers_of, as).get()) {
            if (blocked(p, as) || path_contains(cur.path, p)) continue;
            if (improve(p, {0, prepended(p, cur.path)})) work.insert(p);
        }
    }

    // One peer hop: customer routes cross p2p links but go no further up.
    std::vector<std::pair<Asn, AsPath>> snapshot;
    for (const auto& [as, cand] : best)
        if (cand.cls == 0) snapshot.push_back({as, cand.path});
    for (const auto& [as, path] : snapshot)
        for (Asn q : neighbors(topo.peers_of, as).get()) {
            if (path_contains(path, q)) continue;
            improve(q, {1, prepended(q, path)});
        }

    // Everything flows down to customers.
    for (const auto& [as, cand] : best) {
        (void)cand;
        work.insert(as);
    }
    while (!work.empty()) {
        Asn as = *work.begin();
        work.erase(work.begin());
        Candidate cur = best[as];
        if (cur.cls == 3) continue;
        for (Asn c : neighbors(topo.customers_of, as).get()) {
            if (blocked(as, c) || path_contains(cur.path, c)) continue;
            if (improve(c, {2, prepended(c, cur.path)})) work.insert(c);
        }
    }

    std::map<Asn, AsPath> routes;
    for (auto& [as, cand] : best) routes[as] = std::move(cand.path);
    return routes;
}

namespace {

std::map<IpPrefix, std::map<Asn, AsPath>> base_tables(const SynthTopology& topo) {
    std::map<IpPrefix, std::map<Asn, AsPath>> by_prefix;
    for (const auto& [origin, prefix] : topo.origin_prefix)
        by_prefix[prefix] = propagate_routes(topo, {{origin, {origin}}});
    return by_prefix;
}

} // namespace

RouteUsage baseline_route_usage(const SynthTopology& topo) {
    RouteUsage usage;
    for (const auto& [prefix, routes] : base_tables(topo)) {
        (void)prefix;
        for (const auto& [as, path] : routes) {
            (void)as;
            for (size_t i = 0; i + 1 < path.size(); ++i) {
                Asn a = path[i], b = path[i + 1];
                ++usage[{std::min(a, b), std::max(a, b)}];
            }
        }
    }
    return usage;
}

std::map<Asn, std::map<IpPrefix, AsPath>> baseline_rib(const SynthTopology& topo) {
    std::map<Asn, std::map<IpPrefix, AsPath>> rib;
    auto tables = base_tables(topo);
    for (Asn v : topo.vantages)
        for (const auto& [prefix, routes] : tables) {
            auto it = routes.find(v);
            if (it != routes.end()) rib[v][prefix] = it->second;
        }
    return rib;
}

namespace {

struct AnomalyPlan {
    InjectedAnomaly info;
    std::map<Asn, AsPath> table; // routes for info.announced_prefix while active
};

Asn tier1_ancestor(const SynthTopology& topo, Asn as) {
    std::set<Asn> t1(topo.tier1.begin(), topo.tier1.end());
    Asn cur = as;
    for (int hops = 0; hops < 16; ++hops) {
        if (t1.count(cur)) return cur;
        auto it = topo.providers_of.find(cur);
        if (it == topo.providers_of.end() || it->second.empty()) return cur;
        cur = it->second.front();
    }
    return cur;
}

uint32_t tier1_depth(const SynthTopology& topo, Asn as) {
    std::set<Asn> t1(topo.tier1.begin(), topo.tier1.end());
    Asn cur = as;
    for (uint32_t hops = 0; hops < 16; ++hops) {
        if (t1.count(cur)) return hops;
        auto it = topo.providers_of.find(cur);
        if (it == topo.providers_of.end() || it->second.empty()) return hops;
        cur = it->second.front();
    }
    return 16;
}

bool path_has(const AsPath& p, Asn as) {
    return std::find(p.begin(), p.end(), as) != p.end();
}

struct ImpactCheck {
    uint32_t changed = 0; // vantages whose route differs
    uint32_t skewed = 0;  // changed vantages whose hop count also differs
    bool clean = true;    // actor on every new route, on no old route
};

// Compares the two tables vantage by vantage. `clean` fails when any changed
// vantage breaks the adoption rule: the new route must run through the
// responsible AS and the old one must not. Second-order fallout (a vantage
// sidestepping onto another clean branch because an upstream AS adopted the
// bad route) would poison the per-event responsible-AS intersection, so such
// candidates are discarded. `skewed` counts the changes that also alter the
// hop count; the leak placement demands several of those so the detour stays
// structurally visible.
ImpactCheck check_impact(const SynthTopology& topo, const std::map<Asn, AsPath>& now,
                         const std::map<Asn, AsPath>& then, Asn actor) {
    ImpactCheck res;
    for (Asn v : topo.vantages) {
        auto a = now.find(v), b = then.find(v);
        bool ha = a != now.end(), hb = b != then.end();
        if (ha != hb) {
            res.clean = false;
            return res;
        }
        if (!ha || a->second == b->second) continue;
        ++res.changed;
        if (!path_has(a->second, actor) || path_has(b->second, actor)) {
            res.clean = false;
            return res;
        }
        if (a->second.size() != b->second.size()) ++res.skewed;
    }
    return res;
}

} // namespace

ReplaySummary generate_replay(const SynthTopology& topo, const AnnouncementSink& sink) {
    const SynthSpec& spec = topo.spec;
    Rng rng(spec.seed * 0x9e3779b97f4a7c15ull + 1);

    auto tables = base_tables(topo);

    Asn flip_a = 0, flip_b = 0;
    std::vector<Asn> multihomed;
    for (const auto& [as, provs] : topo.providers_of)
        if (provs.size() == 2 && std::binary_search(topo.stubs.begin(), topo.stubs.end(), as)) {
            multihomed.push_back(as);
            flip_a = provs[0];
            flip_b = provs[1];
        }
    if (flip_a > flip_b) std::swap(flip_a, flip_b);

    // Precomputed alternate tables: failover routes with the primary link cut,
    // and sibling-origin tables for MOAS churn.
    std::map<Asn, std::map<Asn, AsPath>> flip_alt;
    for (Asn s : multihomed) {
        // cut whichever provider link the steady state uses at the lone
        // chain-side vantage, which is the lower-numbered provider
        flip_alt[s] = propagate_routes(topo, {{s, {s}}}, {{flip_a, s}});
    }
    std::map<size_t, std::map<Asn, AsPath>> moas_alt;
    for (size_t j = 0; j < topo.siblings.size(); ++j)
        moas_alt[j] = propagate_routes(topo, {{topo.siblings[j].second, {topo.siblings[j].second}}});

    // Plan the injected incidents. Victims and actors are single-homed,
    // non-sibling stubs from different tier1 branches, each used once.
    std::set<Asn> reserved(multihomed.begin(), multihomed.end());
    for (auto& [a, b] : topo.siblings) {
        reserved.insert(a);
        reserved.insert(b);
    }
    std::vector<Asn> pool;
    for (Asn s : topo.stubs)
        if (!reserved.count(s)) pool.push_back(s);
    rng.shuffle(pool);

    std::vector<Asn> leakers;
    for (Asn m : topo.mids) {
        auto it = topo.providers_of.find(m);
        if (it != topo.providers_of.end() && it->second.size() >= 2 && m != flip_a && m != flip_b)
            leakers.push_back(m);
    }

    std::set<Asn> used;
    auto take_pair = [&](AnomalyKind kind, AnomalyPlan& plan) {
        for (size_t vi = 0; vi < pool.size(); ++vi) {
            Asn victim = pool[vi];
            if (used.count(victim)) continue;
            IpPrefix vp = topo.origin_prefix.at(victim);
            if (kind == AnomalyKind::route_leak) {
                for (Asn leaker : leakers) {
                    auto route = tables.at(vp).find(leaker);
                    if (route == tables.at(vp).end() || route->second.size() < 2) continue;
                    const auto& provs = topo.providers_of.at(leaker);
                    Asn learned_from = route->second[1];
                    if (!std::binary_search(provs.begin(), provs.end(), learned_from)) continue;
                    Asn receiver = 0;
                    for (Asn p : provs)
                        if (p != learned_from && !path_contains(route->second, p)) receiver = p;
                    if (!receiver) continue;
                    auto table = propagate_routes(
                        topo, {{victim, {victim}}, {receiver, prepended(receiver, route->second)}});
                    ImpactCheck ic = check_impact(topo, table, tables.at(vp), leaker);
                    if (!ic.clean || ic.skewed < 3) continue;
                    uint32_t impact = ic.changed;
                    plan.info.actor = leaker;
                    plan.info.victim = victim;
                    plan.info.victim_prefix = vp;
                    plan.info.announced_prefix = vp;
                    plan.info.impact_vantages = impact;
                    plan.table = std::move(table);
                    // the leaker is infrastructure, not an endpoint; two leak
                    // incidents may share it as long as their victims differ
                    used.insert(victim);
                    return true;
                }
                continue;
            }
            for (size_t ai = 0; ai < pool.size(); ++ai) {
                Asn actor = pool[ai];
                if (actor == victim || used.count(actor)) continue;
                if (tier1_ancestor(topo, actor) == tier1_ancestor(topo, victim)) continue;
                // Two stubs at the same depth under look-alike providers can
                // occupy the same spot in the embedding, and a swap between
                // them scores like ordinary churn. A depth mismatch guarantees
                // the origin pair spans a hierarchy layer, which every path
                // comparison for the hijacked prefix has to cross.
                if (tier1_depth(topo, actor) == tier1_depth(topo, victim)) continue;
                std::map<Asn, AsPath> table;
                IpPrefix announced = vp;
                if (kind == AnomalyKind::prefix_hijack) {
                    table = propagate_routes(topo, {{victim, {victim}}, {actor, {actor}}});
                } else if (kind == AnomalyKind::subprefix_hijack) {
                    announced = IpPrefix::parse("10." + std::to_string(vp.addr[1]) + ".1.0/24");
                    table = propagate_routes(topo, {{actor, {actor}}});
                } else {
                    table = propagate_routes(topo, {{victim, {victim}}, {actor, {actor, victim}}});
                }
                ImpactCheck ic = check_impact(topo, table, tables.at(vp), actor);
                if (!ic.clean || ic.changed < 3) continue;
                uint32_t impact = ic.changed;
                if (kind == AnomalyKind::subprefix_hijack && impact != topo.vantages.size())
                    continue; // the fresh prefix must surface everywhere
                plan.info.actor = actor;
                plan.info.victim = victim;
                plan.info.victim_prefix = vp;
                plan.info.announced_prefix = announced;
                plan.info.impact_vantages = impact;
                plan.table = std::move(table);
                used.insert(victim);
                used.insert(actor);
                return true;
            }
        }
        return false;
    };

    std::vector<AnomalyPlan> plans(spec.anomaly_count);
    const AnomalyKind cycle[4] = {AnomalyKind::prefix_hijack, AnomalyKind::subprefix_hijack,
                                  AnomalyKind::path_hijack, AnomalyKind::route_leak};
    // Leak placements are the scarcest (few mids qualify as leakers), so they
    // pick victims before the hijack kinds drain the pool.
    std::vector<uint32_t> order;
    for (uint32_t k = 0; k < spec.anomaly_count; ++k)
        if (cycle[k % 4] == AnomalyKind::route_leak) order.push_back(k);
    for (uint32_t k = 0; k < spec.anomaly_count; ++k)
        if (cycle[k % 4] != AnomalyKind::route_leak) order.push_back(k);
    for (uint32_t k : order) {
        AnomalyPlan& plan = plans[k];
        plan.info.id = k + 1;
        plan.info.kind = cycle[k % 4];
        plan.info.t_start = spec.start_t + spec.first_anomaly_s + int64_t(k) * spec.anomaly_spacing_s;
        plan.info.t_end = plan.info.t_start + spec.anomaly_duration_s;
        if (!take_pair(plan.info.kind, plan))
            throw ConfigError("topology too small to place all requested anomalies");
    }

    // Replay state: what each vantage currently has, per prefix.
    std::map<Asn, std::map<IpPrefix, AsPath>> cur;
    for (Asn v : topo.vantages)
        for (const auto& [prefix, routes] : tables) {
            auto it = routes.find(v);
            if (it != routes.end()) cur[v][prefix] = it->second;
        }

    std::vector<IpPrefix> churn_prefixes; // noop/prepend targets, anomaly victims excluded
    {
        std::set<Asn> touchy;
        for (const auto& p : plans) {
            touchy.insert(p.info.victim);
            touchy.insert(p.info.actor);
        }
        for (const auto& [as, prefix] : topo.origin_prefix)
            if (!touchy.count(as)) churn_prefixes.push_back(prefix);
    }

    ReplaySummary sum;
    uint64_t index = 0;
    int64_t last_t = -1;
    uint32_t next_us = 0;
    auto emit = [&](int64_t t, Asn vantage, AnnKind kind, const IpPrefix& prefix,
                    const AsPath& path, uint32_t label) {
        Announcement ann;
        ann.index = index++;
        ann.t = std::max(t, last_t);
        if (ann.t == last_t)
            ann.t_us = ++next_us;
        else
            next_us = 0;
        last_t = ann.t;
        ann.vantage = vantage;
        ann.kind = kind;
        ann.prefix = prefix;
        ann.path.asns = path;
        sink(ann, label);
        if (label) plans[label - 1].info.announcement_indices.push_back(ann.index);
        ++sum.announcements;
    };

    std::map<Asn, bool> degraded;
    std::vector<bool> secondary(topo.siblings.size(), false);

    auto announce_table = [&](const IpPrefix& prefix, const std::map<Asn, AsPath>& table,
                              int64_t t, uint32_t label, bool only_changed) {
        for (Asn v : topo.vantages) {
            auto it = table.find(v);
            if (it == table.end()) continue;
            auto& slot = cur[v][prefix];
            if (only_changed && slot == it->second) continue;
            emit(t, v, AnnKind::announce, prefix, it->second, label);
            slot = it->second;
        }
    };

    struct Boundary {
        int64_t t;
        size_t plan;
        bool start;
    };
    std::vector<Boundary> boundaries;
    for (size_t i = 0; i < plans.size(); ++i) {
        boundaries.push_back({plans[i].info.t_start, i, true});
        boundaries.push_back({plans[i].info.t_end, i, false});
    }
    std::sort(boundaries.begin(), boundaries.end(),
              [](const Boundary& a, const Boundary& b) { return a.t < b.t; });
    size_t next_boundary = 0;

    double cursor = double(spec.start_t);
    int64_t end_t = spec.start_t + spec.duration_s;
    while (sum.announcements < spec.target_announcements || next_boundary < boundaries.size()) {
        if (next_boundary < boundaries.size() && double(boundaries[next_boundary].t) <= cursor) {
            const Boundary& b = boundaries[next_boundary++];
            AnomalyPlan& plan = plans[b.plan];
            const IpPrefix& ap = plan.info.announced_prefix;
            if (b.start) {
                announce_table(ap, plan.table, b.t, plan.info.id, true);
            } else if (plan.info.kind == AnomalyKind::subprefix_hijack) {
                for (Asn v : topo.vantages) {
                    auto& per = cur[v];
                    auto it = per.find(ap);
                    if (it == per.end()) continue;
                    emit(b.t, v, AnnKind::withdraw, ap, {}, plan.info.id);
                    per.erase(it);
                }
            } else {
                announce_table(ap, tables.at(ap), b.t, plan.info.id, true);
            }
            continue;
        }

        int64_t t = int64_t(cursor);
        double pick = rng.unit();
        if (pick < 0.45 || multihomed.empty()) {
            Asn v = topo.vantages[rng.below(topo.vantages.size())];
            const IpPrefix& p = churn_prefixes[rng.below(churn_prefixes.size())];
            auto it = cur[v].find(p);
            if (it != cur[v].end()) emit(t, v, AnnKind::announce, p, it->second, 0);
        } else if (pick < 0.75) {
            Asn s = multihomed[rng.below(multihomed.size())];
            bool& d = degraded[s];
            d = !d;
            const auto& table = d ? flip_alt.at(s) : tables.at(topo.origin_prefix.at(s));
            announce_table(topo.origin_prefix.at(s), table, t, 0, false);
        } else if (pick < 0.90 && !topo.siblings.empty()) {
            size_t j = rng.below(topo.siblings.size());
            secondary[j] = !secondary[j];
            const IpPrefix& p = topo.origin_prefix.at(topo.siblings[j].first);
            const auto& table = secondary[j] ? moas_alt.at(j) : tables.at(p);
            announce_table(p, table, t, 0, false);
        } else {
            const IpPrefix& p = churn_prefixes[rng.below(churn_prefixes.size())];
            for (Asn v : topo.vantages) {
                auto it = cur[v].find(p);
                if (it == cur[v].end()) continue;
                AsPath padded = it->second;
                padded.push_back(padded.back());
                emit(t, v, AnnKind::announce, p, padded, 0);
            }
        }
        ++sum.churn_events;

        uint64_t remaining =
            sum.announcements < spec.target_announcements ? spec.target_announcements - sum.announcements : 1;
        double est_events = std::max(1.0, double(remaining) / 6.0);
        double horizon = std::max(double(end_t) - cursor, 1.0);
        cursor += std::clamp(horizon / est_events, 0.05, 30.0);
    }

    for (auto& p : plans) sum.anomalies.push_back(std::move(p.info));
    return sum;
}

DatasetPaths write_dataset(const SynthTopology& topo, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    DatasetPaths paths;
    paths.relationships = dir + "/relationships.txt";
    paths.rib = dir + "/rib.jsonl";
    paths.replay = dir + "/replay.jsonl";
    paths.truth = dir + "/truth.jsonl";
    paths.roa = dir + "/roa.csv";
    paths.orgs = dir + "/orgs.tsv";
    paths.route_usage = dir + "/route_usage.tsv";

    save_relationships(paths.relationships, topo.records, RelFileFormat::caida);

    {
        std::ofstream out(paths.rib);
        if (!out) throw IoError("cannot write " + paths.rib);
        for (const auto& [vantage, entries] : baseline_rib(topo))
            for (const auto& [prefix, path] : entries) write_rib_entry(out, vantage, prefix, path);
    }
    {
        std::ofstream out(paths.roa);
        if (!out) throw IoError("cannot write " + paths.roa);
        out << "prefix,max_length,asn\n";
        auto sorted = topo.roas;
        std::sort(sorted.begin(), sorted.end(), [](const RoaEntry& a, const RoaEntry& b) {
            return std::tie(a.prefix, a.asn) < std::tie(b.prefix, b.asn);
        });
        for (const auto& r : sorted)
            out << r.prefix.to_string() << ',' << int(r.max_length) << ',' << r.asn << '\n';
    }
    {
        std::ofstream out(paths.orgs);
        if (!out) throw IoError("cannot write " + paths.orgs);
        for (const auto& [as, org] : topo.org_of) out << as << '\t' << org << '\n';
    }
    save_route_usage(paths.route_usage, baseline_route_usage(topo));

    std::ofstream replay(paths.replay);
    if (!replay) throw IoError("cannot write " + paths.replay);
    ReplaySummary sum = generate_replay(
        topo, [&](const Announcement& ann, uint32_t) { write_announcement(replay, ann); });
    replay.close();

    std::ofstream truth(paths.truth);
    if (!truth) throw IoError("cannot write " + paths.truth);
    for (const auto& a : sum.anomalies) {
        nlohmann::json j{{"id", a.id},
                         {"kind", to_string(a.kind)},
                         {"actor", a.actor},
                         {"victim", a.victim},
                         {"victim_prefix", a.victim_prefix.to_string()},
                         {"announced_prefix", a.announced_prefix.to_string()},
                         {"t_start", a.t_start},
                         {"t_end", a.t_end},
                         {"impact_vantages", a.impact_vantages},
                         {"announcements", a.announcement_indices}};
        truth << j.dump() << '\n';
    }
    return paths;
}

} // namespace routerole
