#include "routerole/as_graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "routerole/errors.hpp"

namespace routerole {

AsGraph AsGraph::from_records(const std::vector<RelationshipRecord>& records) {
    AsGraph g;

    std::set<Asn> vertex_set;
    for (const auto& r : records) {
        vertex_set.insert(r.u);
        vertex_set.insert(r.v);
    }
    g.asns_.assign(vertex_set.begin(), vertex_set.end());
    g.index_.reserve(g.asns_.size());
    for (uint32_t i = 0; i < g.asns_.size(); ++i) g.index_[g.asns_[i]] = i;

    std::set<std::pair<uint32_t, uint32_t>> edge_set;
    for (const auto& r : records) {
        uint32_t ui = g.index_[r.u], vi = g.index_[r.v];
        switch (r.rel) {
            case Relationship::p2c: edge_set.emplace(ui, vi); break;
            case Relationship::c2p: edge_set.emplace(vi, ui); break;
            case Relationship::p2p:
                edge_set.emplace(ui, vi);
                edge_set.emplace(vi, ui);
                break;
        }
    }

    size_t n = g.asns_.size();
    g.out_.resize(n);
    g.in_.resize(n);
    g.und_.resize(n);
    g.edge_list_.assign(edge_set.begin(), edge_set.end());
    g.edge_total_ = g.edge_list_.size();
    for (auto [u, v] : g.edge_list_) {
        g.out_[u].push_back(v);
        g.in_[v].push_back(u);
    }
    for (size_t i = 0; i < n; ++i) {
        std::vector<uint32_t> und(g.out_[i]);
        und.insert(und.end(), g.in_[i].begin(), g.in_[i].end());
        std::sort(und.begin(), und.end());
        und.erase(std::unique(und.begin(), und.end()), und.end());
        g.und_[i] = std::move(und);
    }
    return g;
}

uint32_t AsGraph::index_of(Asn asn) const {
    auto it = index_.find(asn);
    if (it == index_.end()) throw UnknownAsn(asn);
    return it->second;
}

bool AsGraph::has_edge(Asn u, Asn v) const {
    auto iu = index_.find(u);
    auto iv = index_.find(v);
    if (iu == index_.end() || iv == index_.end()) return false;
    return has_edge_idx(iu->second, iv->second);
}

bool AsGraph::has_edge_idx(uint32_t u, uint32_t v) const {
    const auto& adj = out_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
}

AsGraph build_graph(const std::vector<RelationshipRecord>& records) {
    if (records.empty()) throw EmptyInput("cannot build a graph from zero relationship records");
    return AsGraph::from_records(records);
}

void save_graph(std::ostream& out, const AsGraph& g) {
    out << "asgraph 1\n";
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (Asn a : g.asns()) out << a << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

AsGraph load_graph(std::istream& in, const std::string& filename) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "asgraph" || version != 1)
        throw MalformedLine(filename, 1, "not an asgraph dump");
    size_t n = 0, m = 0;
    if (!(in >> n >> m)) throw MalformedLine(filename, 2, "missing vertex/edge counts");

    // Rebuild through the record path so the invariants stay in one place.
    std::vector<Asn> asns(n);
    for (size_t i = 0; i < n; ++i)
        if (!(in >> asns[i])) throw MalformedLine(filename, 3 + i, "missing vertex");
    std::vector<RelationshipRecord> records;
    records.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        uint32_t u = 0, v = 0;
        if (!(in >> u >> v) || u >= n || v >= n)
            throw MalformedLine(filename, 3 + n + i, "bad edge");
        // One directed record per dumped edge; p2c maps 1:1 onto (u,v).
        records.push_back({asns[u], asns[v], Relationship::p2c});
    }
    if (records.empty()) throw EmptyInput("graph dump has no edges: " + filename);
    AsGraph g = AsGraph::from_records(records);
    if (g.vertex_count() != n)
        throw CorruptModel("graph dump lists isolated vertices: " + filename);
    return g;
}

} // namespace routerole
