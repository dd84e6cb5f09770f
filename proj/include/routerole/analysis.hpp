#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "routerole/as_graph.hpp"
#include "routerole/embedding.hpp"

namespace routerole {

// Named AS pair sets used to sanity-check what the embedding learned.
// Relationship classes crossed with topological similarity (Jaccard index of
// undirected neighbor sets, in percent):
//   p2p              directly peering pairs
//   p2p_ji_0_10      peering pairs whose neighborhoods barely overlap
//   p2c_ji_0_10      provider/customer pairs with little overlap
//   p2c_chain_K      pairs connected by exactly K consecutive
//                    provider-to-customer hops (K = 1..6)
//   norel_ji_A_B     non-adjacent pairs in a given Jaccard band
struct PairSets {
    std::map<std::string, std::vector<std::pair<Asn, Asn>>> sets;
};

double neighbor_jaccard(const AsGraph& graph, uint32_t u, uint32_t v);

// Directed adjacency restricted to provider-to-customer links. P2P records
// contribute edges both ways in the graph, so pure provider chains need the
// original records.
std::vector<std::vector<uint32_t>> p2c_only_adjacency(const AsGraph& graph,
                                                      const std::vector<RelationshipRecord>& records);

// Builds every named set, sampling down to max_per_set pairs with the given
// seed when a class is larger than that.
PairSets build_pair_sets(const AsGraph& graph, const std::vector<RelationshipRecord>& records,
                         size_t max_per_set, uint64_t seed);

// Sorted pair-difference values for every named set.
std::map<std::string, std::vector<double>> pair_set_differences(const EmbeddingModel& model,
                                                                const PairSets& sets);

double mean_of(const std::vector<double>& values);
double median_of_sorted(const std::vector<double>& values);

// Deterministic PCA to two components (covariance + cyclic Jacobi sweeps;
// component sign fixed so the entry of largest magnitude is positive).
// Returns one (pc1, pc2) coordinate per input row.
std::vector<std::array<double, 2>> pca2(const std::vector<std::vector<double>>& rows);

} // namespace routerole
