#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "routerole/asn.hpp"
#include "routerole/relationships.hpp"

namespace routerole {

// Directed graph over ASes. Every relationship record becomes directed
// edges: P2C(u,v) -> (u,v), C2P(u,v) -> (v,u), P2P(u,v) -> both (u,v) and
// (v,u). An edge (u,v) therefore reads "u exports routes through v's
// announcements", i.e. u is a provider or peer of v.
//
// Vertices get dense indices in ascending ASN order so that model parameter
// rows are stable regardless of input record order.
class AsGraph {
public:
    AsGraph() = default;

    static AsGraph from_records(const std::vector<RelationshipRecord>& records);

    size_t vertex_count() const { return asns_.size(); }
    size_t edge_count() const { return edge_total_; }

    bool contains(Asn asn) const { return index_.count(asn) != 0; }
    // Dense index of an ASN; throws UnknownAsn.
    uint32_t index_of(Asn asn) const;
    Asn asn_at(uint32_t idx) const { return asns_[idx]; }
    const std::vector<Asn>& asns() const { return asns_; }

    bool has_edge(Asn u, Asn v) const;
    bool has_edge_idx(uint32_t u, uint32_t v) const;
    // True if u and v are adjacent in either direction.
    bool adjacent(Asn u, Asn v) const { return has_edge(u, v) || has_edge(v, u); }

    const std::vector<uint32_t>& out_neighbors(uint32_t idx) const { return out_[idx]; }
    const std::vector<uint32_t>& in_neighbors(uint32_t idx) const { return in_[idx]; }
    // Union of in- and out-neighbors, sorted.
    const std::vector<uint32_t>& neighbors(uint32_t idx) const { return und_[idx]; }

    // All directed edges as sorted (u,v) dense index pairs.
    const std::vector<std::pair<uint32_t, uint32_t>>& edges() const { return edge_list_; }

    bool operator==(const AsGraph& other) const {
        return asns_ == other.asns_ && edge_list_ == other.edge_list_;
    }

private:
    std::vector<Asn> asns_; // ascending
    std::unordered_map<Asn, uint32_t> index_;
    std::vector<std::vector<uint32_t>> out_, in_, und_; // sorted adjacency
    std::vector<std::pair<uint32_t, uint32_t>> edge_list_;
    size_t edge_total_ = 0;
};

// Throws EmptyInput when records is empty.
AsGraph build_graph(const std::vector<RelationshipRecord>& records);

// Plain-text dump that reloads to an identical graph.
void save_graph(std::ostream& out, const AsGraph& g);
AsGraph load_graph(std::istream& in, const std::string& filename = "<graph>");

} // namespace routerole
