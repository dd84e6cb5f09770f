#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <vector>

#include "routerole/as_graph.hpp"
#include "routerole/rng.hpp"
#include "routerole/validator.hpp"

using namespace routerole;

namespace {

IpPrefix pfx(const std::string& s) { return IpPrefix::parse(s); }

// Literal restatement of the validation states over a flat ROA list.
RpkiState rpki_oracle(const std::vector<RoaEntry>& roas, const IpPrefix& prefix, Asn origin) {
    bool covered = false, origin_match = false, valid = false;
    for (const RoaEntry& roa : roas) {
        if (!roa.prefix.covers(prefix)) continue;
        covered = true;
        if (roa.asn == origin) {
            origin_match = true;
            if (prefix.length <= roa.max_length) valid = true;
        }
    }
    if (!covered) return RpkiState::not_found;
    if (valid) return RpkiState::valid;
    return origin_match ? RpkiState::invalid_length : RpkiState::invalid_asn;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content) : path(name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

RouteChange change_with(AsPath old_path, AsPath new_path, const std::string& announced,
                        const std::string& conflicting) {
    RouteChange c;
    c.announced = pfx(announced);
    c.conflicting = pfx(conflicting);
    c.old_path = std::move(old_path);
    c.new_path = std::move(new_path);
    return c;
}

// 1 and 2 are tier one peers; each has a customer cone.
//   1 -> 3 -> 5,  2 -> 4 -> 6,  3 ~ 4 peer
AsGraph toy_graph() {
    std::vector<RelationshipRecord> recs{
        {1, 2, Relationship::p2p}, {1, 3, Relationship::p2c}, {2, 4, Relationship::p2c},
        {3, 5, Relationship::p2c}, {4, 6, Relationship::p2c}, {3, 4, Relationship::p2p},
    };
    return build_graph(recs);
}

} // namespace

TEST_CASE("roa states on hand cases") {
    RoaTable table;
    table.add({pfx("10.0.0.0/8"), 16, 100});

    CHECK(table.validate(pfx("10.0.0.0/8"), 100) == RpkiState::valid);
    CHECK(table.validate(pfx("10.5.0.0/16"), 100) == RpkiState::valid);
    CHECK(table.validate(pfx("10.5.5.0/24"), 100) == RpkiState::invalid_length);
    CHECK(table.validate(pfx("10.5.0.0/16"), 200) == RpkiState::invalid_asn);
    CHECK(table.validate(pfx("11.0.0.0/8"), 100) == RpkiState::not_found);

    // a second roa for another origin rescues the same announcement
    table.add({pfx("10.5.0.0/16"), 24, 200});
    CHECK(table.validate(pfx("10.5.5.0/24"), 200) == RpkiState::valid);
    // and origin 100 now counts as invalid_length at /24, not invalid_asn:
    // it does hold a covering roa, just not at that length
    CHECK(table.validate(pfx("10.5.5.0/24"), 100) == RpkiState::invalid_length);
}

TEST_CASE("roa states, randomized against the flat scan") {
    Rng rng(31);
    auto random_prefix = [&](uint8_t min_len, uint8_t max_len) {
        IpPrefix p;
        p.length = uint8_t(min_len + rng.below(uint64_t(max_len - min_len + 1)));
        uint32_t bits = uint32_t(rng.next_u64());
        for (int i = 0; i < 4; ++i) p.addr[i] = uint8_t(bits >> (24 - 8 * i));
        for (unsigned i = p.length; i < 32; ++i)
            p.addr[i / 8] &= uint8_t(~(1u << (7 - i % 8)));
        return p;
    };

    for (int round = 0; round < 20; ++round) {
        RoaTable table;
        std::vector<RoaEntry> flat;
        for (int i = 0; i < 40; ++i) {
            RoaEntry roa;
            roa.prefix = random_prefix(4, 20);
            // narrow the address pool so prefixes actually nest
            roa.prefix.addr[0] = 10;
            roa.prefix.addr[1] &= 0x03;
            roa.max_length = uint8_t(roa.prefix.length + rng.below(6));
            roa.asn = Asn(1 + rng.below(5));
            table.add(roa);
            flat.push_back(roa);
        }
        for (int probe = 0; probe < 100; ++probe) {
            IpPrefix q = random_prefix(4, 28);
            q.addr[0] = 10;
            q.addr[1] &= 0x03;
            Asn origin = Asn(1 + rng.below(5));
            CHECK(table.validate(q, origin) == rpki_oracle(flat, q, origin));
        }
    }
}

TEST_CASE("roa csv loader tolerates headers, comments and AS prefixes") {
    TempFile file("test_validator_roa.csv",
                  "prefix,max_length,asn\n"
                  "# trailing comment\n"
                  "10.0.0.0/8,16,AS100\n"
                  "11.0.0.0/8,8,200\n");
    RoaTable table = RoaTable::load_csv(file.path);
    CHECK(table.size() == 2);
    CHECK(table.validate(pfx("10.5.0.0/16"), 100) == RpkiState::valid);
    CHECK(table.validate(pfx("11.0.0.0/8"), 200) == RpkiState::valid);
}

TEST_CASE("org table equality requires both sides known") {
    OrgTable orgs;
    orgs.set(1, "alpha");
    orgs.set(2, "alpha");
    orgs.set(3, "beta");
    CHECK(orgs.same_org(1, 2));
    CHECK(!orgs.same_org(1, 3));
    CHECK(!orgs.same_org(1, 99)); // unknown never matches
    CHECK(!orgs.same_org(98, 99));
    CHECK(orgs.org_of(3) == std::string("beta"));
    CHECK(!orgs.org_of(99));
}

TEST_CASE("org tsv loader") {
    TempFile file("test_validator_orgs.tsv",
                  "# asn org\n"
                  "1\talpha\n"
                  "2\talpha\textra column ignored\n");
    OrgTable orgs = OrgTable::load_tsv(file.path);
    CHECK(orgs.size() == 2);
    CHECK(orgs.same_org(1, 2));

    TempFile bad("test_validator_orgs_bad.tsv", "1 alpha\n");
    CHECK_THROWS_AS(OrgTable::load_tsv(bad.path), MalformedLine);
}

TEST_CASE("valley freeness on the toy hierarchy") {
    AsGraph g = toy_graph();

    // 5 -> 3 -> 1 ~ 2 -> 4 -> 6, vantage first means reversed storage
    CHECK(valley_free({6, 4, 2, 1, 3, 5}, g) == ValleyVerdict::ok);
    // pure descent and pure ascent are fine
    CHECK(valley_free({5, 3, 1}, g) == ValleyVerdict::ok);
    CHECK(valley_free({1, 3, 5}, g) == ValleyVerdict::ok);
    // single hop across a peering
    CHECK(valley_free({4, 3}, g) == ValleyVerdict::ok);
    // origin only
    CHECK(valley_free({5}, g) == ValleyVerdict::ok);
    // prepending is not a hop
    CHECK(valley_free({5, 5, 3, 3, 3, 1}, g) == ValleyVerdict::ok);

    // a route learned from a peer or provider re-exported upward: the
    // classic leak. 5 hears 3's route and 1 hears it from 5's sibling? No:
    // walk 4 -> 3 -> 5 read origin-first 5, 3, 4: 5 up to 3, then 3 peer 4,
    // ok; but 6, 4, 3, 5 walks 5 up 3, peer 4, then 4 DOWN 6 - still ok.
    CHECK(valley_free({6, 4, 3, 5}, g) == ValleyVerdict::ok);
    // two peer hops in a row violate: 5 up 3, peer 4, peer? 4~3 only peering
    // here, craft with 3 ~ 4 then 4 ~ ... reuse 1 ~ 2: path 2, 1, 3 reads
    // origin 3 up to 1, peer 2: ok. path 4, 3, 1 reads 1 down? 1 -> 3 is
    // p2c so origin-first 1, 3, 4: 1 to 3 descends, 3 to 4 peers after
    // descending: violation.
    CHECK(valley_free({4, 3, 1}, g) == ValleyVerdict::violation);
    // ascending after a peer hop violates
    CHECK(valley_free({1, 4, 3}, g) == ValleyVerdict::violation);
    // ascending after descending violates (the literal valley)
    CHECK(valley_free({5, 3, 1, 2, 4}, g) == ValleyVerdict::ok); // descent only at the end
    CHECK(valley_free({3, 5, 3}, g) == ValleyVerdict::violation); // down then up again

    // unknown adjacency
    CHECK(valley_free({5, 99}, g) == ValleyVerdict::not_evaluable);
    CHECK_THROWS_AS(valley_free({}, g), EmptyPath);
}

TEST_CASE("origin hijack pattern needs cross-org disagreement") {
    AsGraph g = toy_graph();
    RoaTable roas;
    roas.add({pfx("10.0.0.0/8"), 16, 5}); // prefix belongs to AS 5
    OrgTable orgs;
    orgs.set(5, "victim-co");
    orgs.set(6, "attacker-co");

    // origin flips from 5 (valid) to 6 (invalid_asn)
    RouteChange c = change_with({1, 3, 5}, {2, 4, 6}, "10.0.0.0/8", "10.0.0.0/8");
    PatternMatch m = match_patterns(c, roas, orgs, g);
    CHECK(m.origin_hijack);
    CHECK(m.new_state == RpkiState::invalid_asn);
    CHECK(m.old_state == RpkiState::valid);
    CHECK(!m.roa_misconfig);
    CHECK(m.any());

    // the reverse direction (recovery) matches the same pattern
    RouteChange back = change_with({2, 4, 6}, {1, 3, 5}, "10.0.0.0/8", "10.0.0.0/8");
    CHECK(match_patterns(back, roas, orgs, g).origin_hijack);

    // same org on both sides: misconfiguration, not hijack
    orgs.set(6, "victim-co");
    PatternMatch same = match_patterns(c, roas, orgs, g);
    CHECK(!same.origin_hijack);
    CHECK(same.roa_misconfig);
}

TEST_CASE("route leak pattern keys on valley violations") {
    AsGraph g = toy_graph();
    RoaTable roas;
    OrgTable orgs;
    // new path routes through the descent-then-peer valley 1, 3, 4
    RouteChange c = change_with({2, 1}, {4, 3, 1}, "10.0.0.0/8", "10.0.0.0/8");
    PatternMatch m = match_patterns(c, roas, orgs, g);
    CHECK(m.route_leak);
    CHECK(m.new_valley == ValleyVerdict::violation);
    CHECK(m.old_valley == ValleyVerdict::ok);
    CHECK(!m.origin_hijack);
}

TEST_CASE("path manipulation pattern spots reserved asns and fake links") {
    AsGraph g = toy_graph();
    RoaTable roas;
    OrgTable orgs;

    RouteChange reserved = change_with({1, 3, 5}, {1, 64512, 5}, "10.0.0.0/8", "10.0.0.0/8");
    CHECK(match_patterns(reserved, roas, orgs, g).path_manipulation);

    // 5 and 6 are not adjacent in the graph
    RouteChange fake = change_with({1, 3, 5}, {1, 3, 5, 6}, "10.0.0.0/8", "10.0.0.0/8");
    PatternMatch m = match_patterns(fake, roas, orgs, g);
    CHECK(m.path_manipulation);

    RouteChange clean = change_with({1, 3, 5}, {2, 1, 3, 5}, "10.0.0.0/8", "10.0.0.0/8");
    CHECK(!match_patterns(clean, roas, orgs, g).path_manipulation);
}

TEST_CASE("alarm classification demands a strict majority") {
    AsGraph g = toy_graph();
    RoaTable roas;
    roas.add({pfx("10.0.0.0/8"), 16, 5});
    OrgTable orgs;
    orgs.set(5, "a");
    orgs.set(6, "b");

    RouteChange hijack = change_with({1, 3, 5}, {2, 4, 6}, "10.0.0.0/8", "10.0.0.0/8");
    RouteChange benign = change_with({1, 3, 5}, {2, 1, 3, 5}, "10.0.0.0/8", "10.0.0.0/8");

    Alarm alarm;
    PrefixEvent ev;
    ev.announced = ev.conflicting = pfx("10.0.0.0/8");
    ev.changes.push_back({hijack, 1.0});
    ev.changes.push_back({hijack, 1.0});
    ev.changes.push_back({benign, 1.0});
    alarm.events.push_back(ev);

    AlarmValidation v = classify_alarm(alarm, roas, orgs, g);
    CHECK(v.total_changes == 3);
    CHECK(v.counts[0] == 2);
    CHECK(v.high_confidence); // 2 of 3 is a strict majority
    CHECK(v.dominant == 0);
    CHECK(v.rate(0) == doctest::Approx(2.0 / 3.0));

    // at exactly half the alarm stays low confidence
    Alarm half;
    PrefixEvent ev2;
    ev2.announced = ev2.conflicting = pfx("10.0.0.0/8");
    ev2.changes.push_back({hijack, 1.0});
    ev2.changes.push_back({benign, 1.0});
    half.events.push_back(ev2);
    AlarmValidation v2 = classify_alarm(half, roas, orgs, g);
    CHECK(v2.counts[0] == 1);
    CHECK(!v2.high_confidence);
    CHECK(v2.dominant == 0);

    Alarm none;
    PrefixEvent ev3;
    ev3.announced = ev3.conflicting = pfx("10.0.0.0/8");
    ev3.changes.push_back({benign, 1.0});
    none.events.push_back(ev3);
    AlarmValidation v3 = classify_alarm(none, roas, orgs, g);
    CHECK(v3.dominant == -1);
    CHECK(!v3.high_confidence);
    CHECK(v3.rate(0) == 0.0);
}

TEST_CASE("legitimate moas changes stay inside one organization") {
    OrgTable orgs;
    orgs.set(5, "alpha");
    orgs.set(7, "alpha");
    orgs.set(6, "beta");

    // sibling origins, clean paths
    RouteChange moas = change_with({1, 3, 5}, {1, 3, 7}, "10.0.0.0/8", "10.0.0.0/8");
    CHECK(label_legitimate(moas, orgs));

    // same origin is not a moas event at all
    RouteChange same = change_with({1, 3, 5}, {2, 3, 5}, "10.0.0.0/8", "10.0.0.0/8");
    CHECK(!label_legitimate(same, orgs));

    // cross-org
    RouteChange cross = change_with({1, 3, 5}, {1, 4, 6}, "10.0.0.0/8", "10.0.0.0/8");
    CHECK(!label_legitimate(cross, orgs));

    // a repeated asn anywhere disqualifies
    RouteChange looped = change_with({1, 3, 5}, {1, 3, 1, 7}, "10.0.0.0/8", "10.0.0.0/8");
    CHECK(!label_legitimate(looped, orgs));
}
