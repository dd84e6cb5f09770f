#include <doctest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "routerole/perturb.hpp"

using namespace routerole;

namespace {

std::vector<RelationshipRecord> sample_records(size_t n) {
    std::vector<RelationshipRecord> recs;
    for (size_t i = 0; i < n; ++i) {
        Relationship rel = i % 3 == 0   ? Relationship::p2p
                           : i % 3 == 1 ? Relationship::p2c
                                        : Relationship::c2p;
        recs.push_back({Asn(10 + i), Asn(500 + i), rel});
    }
    return recs;
}

size_t count_flipped(const std::vector<RelationshipRecord>& before,
                     const std::vector<RelationshipRecord>& after) {
    REQUIRE(before.size() == after.size());
    size_t flips = 0;
    for (size_t i = 0; i < before.size(); ++i) {
        CHECK(before[i].u == after[i].u);
        CHECK(before[i].v == after[i].v);
        if (before[i].rel != after[i].rel) ++flips;
    }
    return flips;
}

} // namespace

TEST_CASE("noise kinds parse from both spellings") {
    CHECK(noise_kind_from_string("R1") == NoiseKind::random_flip);
    CHECK(noise_kind_from_string("random_flip") == NoiseKind::random_flip);
    CHECK(noise_kind_from_string("R2") == NoiseKind::random_delete);
    CHECK(noise_kind_from_string("W1") == NoiseKind::weighted_flip);
    CHECK(noise_kind_from_string("W2") == NoiseKind::weighted_delete);
    CHECK_THROWS_AS(noise_kind_from_string("R3"), ConfigError);
    CHECK_THROWS_AS(noise_kind_from_string(""), ConfigError);
}

TEST_CASE("affected count is the floor of the ratio") {
    auto recs = sample_records(50);
    CHECK(count_flipped(recs, perturb(recs, NoiseKind::random_flip, 10.0, nullptr, 1)) == 5);
    CHECK(count_flipped(recs, perturb(recs, NoiseKind::random_flip, 5.0, nullptr, 1)) == 2);
    CHECK(count_flipped(recs, perturb(recs, NoiseKind::random_flip, 0.0, nullptr, 1)) == 0);
    CHECK(count_flipped(recs, perturb(recs, NoiseKind::random_flip, 100.0, nullptr, 1)) == 50);

    // 10% of 7 records floors to 0
    auto seven = sample_records(7);
    CHECK(count_flipped(seven, perturb(seven, NoiseKind::random_flip, 10.0, nullptr, 1)) == 0);
    CHECK(count_flipped(seven, perturb(seven, NoiseKind::random_flip, 15.0, nullptr, 1)) == 1);

    CHECK(perturb(recs, NoiseKind::random_delete, 10.0, nullptr, 1).size() == 45);
    CHECK_THROWS_AS(perturb(recs, NoiseKind::random_flip, 101.0, nullptr, 1), ConfigError);
    CHECK_THROWS_AS(perturb(recs, NoiseKind::random_flip, -1.0, nullptr, 1), ConfigError);
}

TEST_CASE("flips exchange the p2p and p2c labels") {
    std::vector<RelationshipRecord> recs{
        {1, 2, Relationship::p2p},
        {3, 4, Relationship::p2c},
        {5, 6, Relationship::c2p},
    };
    auto out = perturb(recs, NoiseKind::random_flip, 100.0, nullptr, 9);
    REQUIRE(out.size() == 3);
    CHECK(out[0].rel == Relationship::p2c);
    CHECK(out[1].rel == Relationship::p2p);
    CHECK(out[2].rel == Relationship::p2p); // c2p flips to the peer label too
}

TEST_CASE("random selection is seeded") {
    auto recs = sample_records(60);
    auto a = perturb(recs, NoiseKind::random_flip, 20.0, nullptr, 7);
    auto b = perturb(recs, NoiseKind::random_flip, 20.0, nullptr, 7);
    CHECK(a == b);

    auto c = perturb(recs, NoiseKind::random_flip, 20.0, nullptr, 8);
    CHECK(count_flipped(recs, c) == 12);
    CHECK(a != c); // another seed picks another subset
}

TEST_CASE("deletion keeps the survivors in order") {
    auto recs = sample_records(40);
    auto out = perturb(recs, NoiseKind::random_delete, 25.0, nullptr, 3);
    REQUIRE(out.size() == 30);
    // survivors appear in their original relative order
    size_t cursor = 0;
    for (const auto& rec : out) {
        while (cursor < recs.size() && !(recs[cursor] == rec)) ++cursor;
        REQUIRE(cursor < recs.size());
        ++cursor;
    }
}

TEST_CASE("weighted noise targets the least used links first") {
    std::vector<RelationshipRecord> recs{
        {1, 2, Relationship::p2c}, // usage 50
        {3, 4, Relationship::p2c}, // usage 5
        {5, 6, Relationship::p2c}, // usage 200
        {7, 8, Relationship::p2c}, // missing: counts as zero
        {9, 10, Relationship::p2c}, // usage 5, tie with (3,4): higher (u,v)
    };
    RouteUsage usage;
    usage[{1, 2}] = 50;
    usage[{3, 4}] = 5;
    usage[{5, 6}] = 200;
    usage[{9, 10}] = 5;

    // one record: the missing-usage link goes first
    auto one = perturb(recs, NoiseKind::weighted_flip, 20.0, &usage, 1);
    CHECK(one[3].rel == Relationship::p2p);
    CHECK(count_flipped(recs, one) == 1);

    // three records: zero, then the two fives in ascending (u,v) order;
    // different seeds cannot change a weighted selection
    auto three = perturb(recs, NoiseKind::weighted_flip, 60.0, &usage, 1);
    auto three_again = perturb(recs, NoiseKind::weighted_flip, 60.0, &usage, 99);
    CHECK(three == three_again);
    CHECK(three[1].rel == Relationship::p2p);
    CHECK(three[3].rel == Relationship::p2p);
    CHECK(three[4].rel == Relationship::p2p);
    CHECK(three[0].rel == Relationship::p2c);
    CHECK(three[2].rel == Relationship::p2c);

    // usage keyed on the unordered pair: a reversed record still matches
    RouteUsage reversed;
    reversed[{2, 1}] = 50;
    CHECK(perturb(std::vector<RelationshipRecord>{{1, 2, Relationship::p2c}},
                  NoiseKind::weighted_delete, 100.0, &reversed, 1)
              .empty());

    auto deleted = perturb(recs, NoiseKind::weighted_delete, 40.0, &usage, 1);
    REQUIRE(deleted.size() == 3);
    // the zero-usage and one five-usage link are gone
    CHECK(deleted[0] == recs[0]);
    CHECK(deleted[1] == recs[2]);
    CHECK(deleted[2] == recs[4]);
}

TEST_CASE("weighted noise without usage data is an error") {
    auto recs = sample_records(10);
    CHECK_THROWS_AS(perturb(recs, NoiseKind::weighted_flip, 10.0, nullptr, 1),
                    MissingRouteUsage);
    CHECK_THROWS_AS(perturb(recs, NoiseKind::weighted_delete, 10.0, nullptr, 1),
                    MissingRouteUsage);
    // random kinds never need it
    CHECK_NOTHROW(perturb(recs, NoiseKind::random_delete, 10.0, nullptr, 1));
}
