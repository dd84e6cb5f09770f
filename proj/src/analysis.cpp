#include "routerole/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "routerole/errors.hpp"
#include "routerole/rng.hpp"

namespace routerole {

double neighbor_jaccard(const AsGraph& graph, uint32_t u, uint32_t v) {
    const auto& nu = graph.neighbors(u);
    const auto& nv = graph.neighbors(v);
    if (nu.empty() && nv.empty()) return 0.0;
    size_t inter = 0;
    size_t i = 0, j = 0;
    while (i < nu.size() && j < nv.size()) {
        if (nu[i] == nv[j]) { ++inter; ++i; ++j; }
        else if (nu[i] < nv[j]) ++i;
        else ++j;
    }
    size_t uni = nu.size() + nv.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::vector<uint32_t>> p2c_only_adjacency(const AsGraph& graph,
                                                      const std::vector<RelationshipRecord>& records) {
    std::vector<std::set<uint32_t>> adj(graph.vertex_count());
    for (const auto& rec : records) {
        if (!graph.contains(rec.u) || !graph.contains(rec.v)) continue;
        uint32_t ui = graph.index_of(rec.u), vi = graph.index_of(rec.v);
        if (rec.rel == Relationship::p2c) adj[ui].insert(vi);
        else if (rec.rel == Relationship::c2p) adj[vi].insert(ui);
    }
    std::vector<std::vector<uint32_t>> out(adj.size());
    for (size_t i = 0; i < adj.size(); ++i) out[i].assign(adj[i].begin(), adj[i].end());
    return out;
}

namespace {

// BFS distances over a directed adjacency list, 0 = unreachable/self.
std::vector<uint32_t> bfs_hops(const std::vector<std::vector<uint32_t>>& adj, uint32_t src,
                               uint32_t cap) {
    std::vector<uint32_t> dist(adj.size(), 0);
    std::deque<uint32_t> queue{src};
    std::vector<char> seen(adj.size(), 0);
    seen[src] = 1;
    while (!queue.empty()) {
        uint32_t cur = queue.front();
        queue.pop_front();
        if (dist[cur] >= cap) continue;
        for (uint32_t nxt : adj[cur]) {
            if (seen[nxt]) continue;
            seen[nxt] = 1;
            dist[nxt] = dist[cur] + 1;
            queue.push_back(nxt);
        }
    }
    return dist;
}

void sample_down(std::vector<std::pair<Asn, Asn>>& pairs, size_t max_per_set, Rng& rng) {
    if (pairs.size() <= max_per_set) return;
    // pairs are generated in deterministic order; a seeded shuffle + resize
    // keeps the subset reproducible
    rng.shuffle(pairs);
    pairs.resize(max_per_set);
    std::sort(pairs.begin(), pairs.end());
}

} // namespace

PairSets build_pair_sets(const AsGraph& graph, const std::vector<RelationshipRecord>& records,
                         size_t max_per_set, uint64_t seed) {
    PairSets out;
    Rng rng(seed);
    const size_t n = graph.vertex_count();

    std::vector<std::pair<Asn, Asn>> p2p_all, p2p_low, p2c_low;
    for (const auto& rec : records) {
        if (!graph.contains(rec.u) || !graph.contains(rec.v)) continue;
        uint32_t ui = graph.index_of(rec.u), vi = graph.index_of(rec.v);
        double ji = neighbor_jaccard(graph, ui, vi);
        if (rec.rel == Relationship::p2p) {
            p2p_all.emplace_back(rec.u, rec.v);
            if (ji < 0.10) p2p_low.emplace_back(rec.u, rec.v);
        } else {
            Asn provider = rec.rel == Relationship::p2c ? rec.u : rec.v;
            Asn customer = rec.rel == Relationship::p2c ? rec.v : rec.u;
            if (ji < 0.10) p2c_low.emplace_back(provider, customer);
        }
    }
    std::sort(p2p_all.begin(), p2p_all.end());
    std::sort(p2p_low.begin(), p2p_low.end());
    std::sort(p2c_low.begin(), p2c_low.end());

    // provider chains: pairs at exactly k provider-to-customer hops
    auto p2c_adj = p2c_only_adjacency(graph, records);
    std::vector<std::vector<std::pair<Asn, Asn>>> chains(7);
    for (uint32_t src = 0; src < n; ++src) {
        auto dist = bfs_hops(p2c_adj, src, 6);
        for (uint32_t dst = 0; dst < n; ++dst) {
            if (dst == src || dist[dst] == 0) continue;
            if (dist[dst] <= 6)
                chains[dist[dst]].emplace_back(graph.asn_at(src), graph.asn_at(dst));
        }
    }

    // unrelated pairs, bucketed by neighborhood overlap
    const std::array<std::pair<double, double>, 6> bands = {{
        {0.0, 0.10}, {0.0, 0.20}, {0.20, 0.40}, {0.40, 0.60}, {0.60, 0.80}, {0.80, 1.01},
    }};
    std::array<std::vector<std::pair<Asn, Asn>>, 6> norel;
    for (uint32_t a = 0; a < n; ++a) {
        for (uint32_t b = a + 1; b < n; ++b) {
            if (graph.has_edge_idx(a, b) || graph.has_edge_idx(b, a)) continue;
            double ji = neighbor_jaccard(graph, a, b);
            for (size_t band = 0; band < bands.size(); ++band)
                if (ji >= bands[band].first && ji < bands[band].second)
                    norel[band].emplace_back(graph.asn_at(a), graph.asn_at(b));
        }
    }

    sample_down(p2p_all, max_per_set, rng);
    sample_down(p2p_low, max_per_set, rng);
    sample_down(p2c_low, max_per_set, rng);
    out.sets["p2p"] = std::move(p2p_all);
    out.sets["p2p_ji_0_10"] = std::move(p2p_low);
    out.sets["p2c_ji_0_10"] = std::move(p2c_low);
    for (int k = 1; k <= 6; ++k) {
        sample_down(chains[k], max_per_set, rng);
        out.sets["p2c_chain_" + std::to_string(k)] = std::move(chains[k]);
    }
    static const char* band_names[6] = {"norel_ji_0_10",  "norel_ji_0_20",  "norel_ji_20_40",
                                        "norel_ji_40_60", "norel_ji_60_80", "norel_ji_80_100"};
    for (size_t band = 0; band < bands.size(); ++band) {
        sample_down(norel[band], max_per_set, rng);
        out.sets[band_names[band]] = std::move(norel[band]);
    }
    return out;
}

std::map<std::string, std::vector<double>> pair_set_differences(const EmbeddingModel& model,
                                                                const PairSets& sets) {
    std::map<std::string, std::vector<double>> out;
    for (const auto& [name, pairs] : sets.sets) {
        std::vector<double> scores;
        scores.reserve(pairs.size());
        for (auto [u, v] : pairs) {
            if (!model.contains(u) || !model.contains(v)) continue;
            scores.push_back(model.pair_difference(u, v));
        }
        std::sort(scores.begin(), scores.end());
        out[name] = std::move(scores);
    }
    return out;
}

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double value : values) sum += value;
    return sum / static_cast<double>(values.size());
}

double median_of_sorted(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<std::array<double, 2>> pca2(const std::vector<std::vector<double>>& rows) {
    std::vector<std::array<double, 2>> coords(rows.size(), {0.0, 0.0});
    if (rows.empty()) return coords;
    const size_t d = rows[0].size();
    const size_t k = rows.size();

    std::vector<double> mean(d, 0.0);
    for (const auto& row : rows)
        for (size_t i = 0; i < d; ++i) mean[i] += row[i];
    for (double& value : mean) value /= static_cast<double>(k);

    // covariance, upper triangle mirrored
    std::vector<double> cov(d * d, 0.0);
    for (const auto& row : rows)
        for (size_t i = 0; i < d; ++i) {
            double ci = row[i] - mean[i];
            for (size_t j = i; j < d; ++j) cov[i * d + j] += ci * (row[j] - mean[j]);
        }
    double denom = k > 1 ? static_cast<double>(k - 1) : 1.0;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = i; j < d; ++j) {
            cov[i * d + j] /= denom;
            cov[j * d + i] = cov[i * d + j];
        }

    // cyclic Jacobi; V accumulates eigenvectors
    std::vector<double> v(d * d, 0.0);
    for (size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (size_t p = 0; p < d; ++p)
            for (size_t q = p + 1; q < d; ++q) off += cov[p * d + q] * cov[p * d + q];
        if (off < 1e-24) break;
        for (size_t p = 0; p < d; ++p) {
            for (size_t q = p + 1; q < d; ++q) {
                double apq = cov[p * d + q];
                if (std::abs(apq) < 1e-300) continue;
                double app = cov[p * d + p], aqq = cov[q * d + q];
                double theta = 0.5 * (aqq - app) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (size_t i = 0; i < d; ++i) {
                    double aip = cov[i * d + p], aiq = cov[i * d + q];
                    cov[i * d + p] = c * aip - s * aiq;
                    cov[i * d + q] = s * aip + c * aiq;
                }
                for (size_t i = 0; i < d; ++i) {
                    double api = cov[p * d + i], aqi = cov[q * d + i];
                    cov[p * d + i] = c * api - s * aqi;
                    cov[q * d + i] = s * api + c * aqi;
                }
                for (size_t i = 0; i < d; ++i) {
                    double vip = v[i * d + p], viq = v[i * d + q];
                    v[i * d + p] = c * vip - s * viq;
                    v[i * d + q] = s * vip + c * viq;
                }
            }
        }
    }

    // two largest eigenvalues, stable order
    std::vector<size_t> order(d);
    for (size_t i = 0; i < d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return cov[a * d + a] > cov[b * d + b];
    });

    for (int comp = 0; comp < 2 && comp < static_cast<int>(d); ++comp) {
        size_t col = order[comp];
        // sign convention: largest-magnitude entry positive
        size_t arg = 0;
        for (size_t i = 1; i < d; ++i)
            if (std::abs(v[i * d + col]) > std::abs(v[arg * d + col])) arg = i;
        double sign = v[arg * d + col] < 0.0 ? -1.0 : 1.0;
        for (size_t row = 0; row < k; ++row) {
            double acc = 0.0;
            for (size_t i = 0; i < d; ++i) acc += (rows[row][i] - mean[i]) * v[i * d + col];
            coords[row][comp] = sign * acc;
        }
    }
    return coords;
}

} // namespace routerole
