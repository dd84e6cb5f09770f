#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "routerole/analysis.hpp"
#include "routerole/as_graph.hpp"

using namespace routerole;

namespace {

// Two providers sharing customers, a peering, and a four-level chain:
//   1 -> {2, 3}   2 ~ 3   2 -> 4 -> 5 -> 6   3 -> 4
std::vector<RelationshipRecord> sample_records() {
    return {
        {1, 2, Relationship::p2c}, {1, 3, Relationship::p2c}, {2, 3, Relationship::p2p},
        {2, 4, Relationship::p2c}, {3, 4, Relationship::p2c}, {4, 5, Relationship::p2c},
        {5, 6, Relationship::p2c},
    };
}

} // namespace

TEST_CASE("neighbor jaccard counts undirected overlap") {
    AsGraph g = build_graph(sample_records());
    uint32_t i2 = g.index_of(2), i3 = g.index_of(3);
    // neighbors(2) = {1, 3, 4}, neighbors(3) = {1, 2, 4};
    // union {1, 2, 3, 4}, intersection {1, 4}
    CHECK(neighbor_jaccard(g, i2, i3) == doctest::Approx(0.5));

    uint32_t i1 = g.index_of(1), i6 = g.index_of(6);
    // neighbors(1) = {2, 3}, neighbors(6) = {5}: disjoint
    CHECK(neighbor_jaccard(g, i1, i6) == 0.0);

    CHECK(neighbor_jaccard(g, i2, i2) == doctest::Approx(1.0));
}

TEST_CASE("p2c adjacency drops peerings and orients c2p records") {
    std::vector<RelationshipRecord> recs{
        {1, 2, Relationship::p2c},
        {3, 2, Relationship::c2p}, // 2 is the provider
        {1, 3, Relationship::p2p},
    };
    AsGraph g = build_graph(recs);
    auto adj = p2c_only_adjacency(g, recs);

    auto has = [&](Asn u, Asn v) {
        const auto& row = adj[g.index_of(u)];
        return std::find(row.begin(), row.end(), g.index_of(v)) != row.end();
    };
    CHECK(has(1, 2));
    CHECK(has(2, 3));
    CHECK(!has(3, 2));
    CHECK(!has(1, 3)); // peering contributes nothing
    CHECK(!has(3, 1));
}

TEST_CASE("pair sets pick out the relationship classes") {
    auto recs = sample_records();
    AsGraph g = build_graph(recs);
    PairSets sets = build_pair_sets(g, recs, 1000, 1);

    const auto& p2p = sets.sets.at("p2p");
    REQUIRE(p2p.size() == 1);
    CHECK(p2p[0] == std::pair<Asn, Asn>{2, 3});

    // chain_1 holds direct provider links, chain_3 e.g. 2 -> 4 -> 5 -> 6
    const auto& c1 = sets.sets.at("p2c_chain_1");
    CHECK(std::count(c1.begin(), c1.end(), std::pair<Asn, Asn>{1, 2}) == 1);
    CHECK(std::count(c1.begin(), c1.end(), std::pair<Asn, Asn>{4, 5}) == 1);

    const auto& c3 = sets.sets.at("p2c_chain_3");
    CHECK(std::count(c3.begin(), c3.end(), std::pair<Asn, Asn>{2, 6}) == 1);
    CHECK(std::count(c3.begin(), c3.end(), std::pair<Asn, Asn>{1, 5}) == 1);

    // 1 and 6 share no edge and no neighbors: lowest overlap band
    const auto& norel = sets.sets.at("norel_ji_0_10");
    CHECK(std::count(norel.begin(), norel.end(), std::pair<Asn, Asn>{1, 6}) == 1);

    // no pair with an edge may appear in any norel band
    for (const auto& [name, pairs] : sets.sets) {
        if (name.rfind("norel", 0) != 0) continue;
        for (auto [u, v] : pairs) CHECK(!g.adjacent(u, v));
    }
}

TEST_CASE("chain membership is exact hop distance") {
    auto recs = sample_records();
    AsGraph g = build_graph(recs);
    auto adj = p2c_only_adjacency(g, recs);
    PairSets sets = build_pair_sets(g, recs, 1000, 1);

    // recompute provider-hop distance by bfs and compare every chain set
    auto hops = [&](uint32_t src, uint32_t dst) {
        std::vector<int> dist(adj.size(), -1);
        std::vector<uint32_t> queue{src};
        dist[src] = 0;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            uint32_t cur = queue[qi];
            for (uint32_t nxt : adj[cur]) {
                if (dist[nxt] >= 0) continue;
                dist[nxt] = dist[cur] + 1;
                queue.push_back(nxt);
            }
        }
        return dist[dst];
    };
    for (int k = 1; k <= 6; ++k) {
        for (auto [u, v] : sets.sets.at("p2c_chain_" + std::to_string(k)))
            CHECK(hops(g.index_of(u), g.index_of(v)) == k);
    }
}

TEST_CASE("oversized sets sample down deterministically") {
    // a star of peers produces many norel pairs between the leaves
    std::vector<RelationshipRecord> recs;
    for (Asn leaf = 2; leaf <= 40; ++leaf) recs.push_back({1, leaf, Relationship::p2c});
    AsGraph g = build_graph(recs);

    PairSets a = build_pair_sets(g, recs, 10, 7);
    PairSets b = build_pair_sets(g, recs, 10, 7);
    for (const auto& [name, pairs] : a.sets) {
        CHECK(pairs.size() <= 10);
        CHECK(b.sets.at(name) == pairs);
        CHECK(std::is_sorted(pairs.begin(), pairs.end()));
    }

    // leaves all share the hub, so their jaccard is high; the sampled subset
    // still only contains genuine non-adjacent pairs
    PairSets c = build_pair_sets(g, recs, 10, 8);
    bool any_difference = false;
    for (const auto& [name, pairs] : a.sets)
        if (c.sets.at(name) != pairs && pairs.size() == 10) any_difference = true;
    CHECK(any_difference); // a different seed picks a different subset
}

TEST_CASE("set differences are sorted pair scores") {
    auto recs = sample_records();
    AsGraph g = build_graph(recs);
    Hyperparams hp;
    hp.dim = 4;
    Rng rng(3);
    EmbeddingModel m(g.asns(), hp, rng);

    PairSets sets = build_pair_sets(g, recs, 1000, 1);
    auto diffs = pair_set_differences(m, sets);
    for (const auto& [name, values] : diffs) {
        CHECK(values.size() == sets.sets.at(name).size());
        CHECK(std::is_sorted(values.begin(), values.end()));
    }
    // spot check one value against the model
    const auto& p2p = sets.sets.at("p2p");
    REQUIRE(p2p.size() == 1);
    CHECK(diffs.at("p2p")[0] == doctest::Approx(m.pair_difference(p2p[0].first, p2p[0].second)));
}

TEST_CASE("mean and median helpers") {
    CHECK(mean_of({1.0, 2.0, 6.0}) == doctest::Approx(3.0));
    CHECK(mean_of({}) == 0.0);
    CHECK(median_of_sorted({1.0, 2.0, 6.0}) == doctest::Approx(2.0));
    CHECK(median_of_sorted({1.0, 3.0}) == doctest::Approx(2.0));
    CHECK(median_of_sorted({5.0}) == doctest::Approx(5.0));
    CHECK(median_of_sorted({}) == 0.0);
}

TEST_CASE("pca projects onto the dominant axes") {
    // points on a tilted line in 5 dimensions plus small noise on axis 3
    std::vector<std::vector<double>> rows;
    for (int i = -10; i <= 10; ++i) {
        double t = i;
        rows.push_back({3.0 * t, 4.0 * t, (i % 3) * 0.01, 0.0, 0.0});
    }
    auto proj = pca2(rows);
    REQUIRE(proj.size() == rows.size());

    // pc1 carries the line: spacing 5 per step (the direction has norm 5)
    double step = proj[1][0] - proj[0][0];
    CHECK(std::abs(std::abs(step) - 5.0) < 1e-4);
    // pc2 variance is tiny by comparison
    double var2 = 0.0;
    for (const auto& p : proj) var2 += p[1] * p[1];
    CHECK(var2 < 0.1);

    // deterministic, including component signs
    auto proj2 = pca2(rows);
    for (size_t i = 0; i < proj.size(); ++i) {
        CHECK(proj[i][0] == proj2[i][0]);
        CHECK(proj[i][1] == proj2[i][1]);
    }
}
