#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "routerole/as_graph.hpp"
#include "routerole/relationships.hpp"

using namespace routerole;

namespace {

std::vector<RelationshipRecord> parse_str(const std::string& text,
                                          RelFileFormat format = RelFileFormat::auto_detect,
                                          ParseStats* stats = nullptr) {
    std::istringstream in(text);
    return parse_relationships(in, format, stats, "<test>");
}

} // namespace

TEST_CASE("caida format parses providers and peers") {
    auto recs = parse_str("# serial 1\n1|2|-1\n3|4|0\n");
    REQUIRE(recs.size() == 2);
    CHECK(recs[0] == RelationshipRecord{1, 2, Relationship::p2c});
    CHECK(recs[1] == RelationshipRecord{3, 4, Relationship::p2p});
}

TEST_CASE("tsv format parses all three labels") {
    auto recs = parse_str("1\t2\tp2c\n2\t3\tc2p\n3\t4\tp2p\n", RelFileFormat::tsv);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].rel == Relationship::p2c);
    CHECK(recs[1].rel == Relationship::c2p);
    CHECK(recs[2].rel == Relationship::p2p);
}

TEST_CASE("format auto-detection keys on the separator") {
    auto caida = parse_str("10|20|0\n");
    auto tsv = parse_str("10\t20\tp2p\n");
    CHECK(caida == tsv);
}

TEST_CASE("malformed lines and unknown codes are rejected") {
    CHECK_THROWS_AS(parse_str("1|2|7\n"), MalformedLine);
    CHECK_THROWS_AS(parse_str("1|2\n"), MalformedLine);
    CHECK_THROWS_AS(parse_str("a|b|0\n"), MalformedLine);
    CHECK_THROWS_AS(parse_str("1\t2\tfriends\n", RelFileFormat::tsv), MalformedLine);
    CHECK_THROWS_AS(parse_str(""), EmptyInput);
    CHECK_THROWS_AS(parse_str("# only comments\n"), EmptyInput);
}

TEST_CASE("duplicate pairs are dropped, first label wins") {
    ParseStats stats;
    auto recs = parse_str("1|2|-1\n1|2|-1\n1|2|0\n3|4|0\n", RelFileFormat::caida, &stats);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].rel == Relationship::p2c); // the conflicting 0 did not overwrite
    CHECK(stats.exact_duplicates == 1);
    CHECK(stats.conflicting_duplicates == 1);
    CHECK(stats.records == 2);
    CHECK(stats.lines == 4);
    CHECK(stats.warnings.size() == 2);
}

TEST_CASE("relationship records round-trip through both formats") {
    auto recs = parse_str("1|2|-1\n2|3|0\n3|9|-1\n");
    for (RelFileFormat fmt : {RelFileFormat::caida, RelFileFormat::tsv}) {
        std::ostringstream out;
        write_relationships(out, recs, fmt);
        CHECK(parse_str(out.str(), fmt) == recs);
    }
}

TEST_CASE("each relationship becomes the right directed edges") {
    auto g = build_graph(parse_str("1\t2\tp2c\n3\t4\tc2p\n5\t6\tp2p\n", RelFileFormat::tsv));

    // provider-to-customer points provider -> customer
    CHECK(g.has_edge(1, 2));
    CHECK(!g.has_edge(2, 1));
    // customer-to-provider is the same edge written from the other side
    CHECK(g.has_edge(4, 3));
    CHECK(!g.has_edge(3, 4));
    // peers point both ways
    CHECK(g.has_edge(5, 6));
    CHECK(g.has_edge(6, 5));

    CHECK(g.edge_count() == 4);
    CHECK(g.adjacent(2, 1));
    CHECK(!g.adjacent(1, 6));
}

TEST_CASE("vertices are indexed in ascending asn order") {
    auto g = build_graph(parse_str("900|30|0\n5|900|-1\n", RelFileFormat::caida));
    REQUIRE(g.vertex_count() == 3);
    CHECK(g.asn_at(0) == 5);
    CHECK(g.asn_at(1) == 30);
    CHECK(g.asn_at(2) == 900);
    CHECK(g.index_of(30) == 1);
    CHECK(g.contains(900));
    CHECK(!g.contains(31));
    CHECK_THROWS_AS(g.index_of(31), UnknownAsn);
}

TEST_CASE("adjacency lists and the edge list are sorted") {
    auto g = build_graph(parse_str("10|40|0\n10|20|0\n10|30|-1\n", RelFileFormat::caida));
    uint32_t ten = g.index_of(10);
    const auto& out = g.out_neighbors(ten);
    CHECK(std::is_sorted(out.begin(), out.end()));
    CHECK(out.size() == 3);
    const auto& und = g.neighbors(ten);
    CHECK(std::is_sorted(und.begin(), und.end()));

    const auto& edges = g.edges();
    CHECK(std::is_sorted(edges.begin(), edges.end()));
    CHECK(edges.size() == g.edge_count());
}

TEST_CASE("in-neighbors mirror out-neighbors") {
    auto g = build_graph(parse_str("1|2|-1\n2|3|-1\n1|3|0\n", RelFileFormat::caida));
    for (auto [u, v] : g.edges()) {
        const auto& ins = g.in_neighbors(v);
        CHECK(std::find(ins.begin(), ins.end(), u) != ins.end());
    }
}

TEST_CASE("graph dump reloads identically") {
    auto g = build_graph(parse_str("1|2|-1\n2|3|0\n2|4|-1\n7|1|0\n", RelFileFormat::caida));
    std::stringstream buffer;
    save_graph(buffer, g);
    AsGraph back = load_graph(buffer, "<buffer>");
    CHECK(back == g);
    CHECK(back.edge_count() == g.edge_count());
}

TEST_CASE("empty record set is rejected") {
    CHECK_THROWS_AS(build_graph({}), EmptyInput);
}
