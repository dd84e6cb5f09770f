#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "routerole/detector.hpp"
#include "routerole/kneedle.hpp"
#include "routerole/rng.hpp"

using namespace routerole;

namespace {

IpPrefix pfx(const std::string& s) { return IpPrefix::parse(s); }

ScoredChange mk(int64_t t, Asn vantage, const std::string& announced,
                const std::string& conflicting, AsPath old_path, AsPath new_path,
                double score = 1.0) {
    ScoredChange sc;
    sc.change.t = t;
    sc.change.vantage = vantage;
    sc.change.announced = pfx(announced);
    sc.change.conflicting = pfx(conflicting);
    sc.change.old_path = std::move(old_path);
    sc.change.new_path = std::move(new_path);
    sc.score = score;
    return sc;
}

ScoredChange mk1(int64_t t, Asn vantage, const std::string& prefix) {
    return mk(t, vantage, prefix, prefix, {vantage, 1, 5}, {vantage, 2, 5});
}

// Reference responsible-set: ASes leaving every old path plus ASes entering
// every new path, computed the obvious quadratic way.
std::vector<Asn> responsible_oracle(const PrefixEvent& event) {
    std::set<Asn> result;
    auto in_path = [](const AsPath& p, Asn a) {
        return std::find(p.begin(), p.end(), a) != p.end();
    };
    std::set<Asn> candidates;
    for (const auto& sc : event.changes) {
        candidates.insert(sc.change.old_path.begin(), sc.change.old_path.end());
        candidates.insert(sc.change.new_path.begin(), sc.change.new_path.end());
    }
    for (Asn a : candidates) {
        bool dropout = true, popup = true;
        for (const auto& sc : event.changes) {
            if (!in_path(sc.change.old_path, a) || in_path(sc.change.new_path, a))
                dropout = false;
            if (!in_path(sc.change.new_path, a) || in_path(sc.change.old_path, a))
                popup = false;
        }
        if (dropout || popup) result.insert(a);
    }
    return {result.begin(), result.end()};
}

} // namespace

TEST_CASE("responsible ases on a textbook hijack") {
    PrefixEvent event;
    // three vantages switch from paths ending at 50 to paths through 66
    event.changes.push_back(mk(0, 1, "10.0.0.0/8", "10.0.0.0/8", {1, 20, 50}, {1, 30, 66}));
    event.changes.push_back(mk(1, 2, "10.0.0.0/8", "10.0.0.0/8", {2, 21, 50}, {2, 30, 66}));
    event.changes.push_back(mk(2, 3, "10.0.0.0/8", "10.0.0.0/8", {3, 20, 50}, {3, 31, 66}));

    // 50 left every path, 66 entered every path; the rest differ per vantage
    CHECK(responsible_ases(event) == std::vector<Asn>{50, 66});
}

TEST_CASE("responsible ases, randomized against the oracle") {
    Rng rng(98);
    for (int trial = 0; trial < 300; ++trial) {
        PrefixEvent event;
        size_t n = 1 + rng.below(5);
        for (size_t i = 0; i < n; ++i) {
            AsPath old_path(1 + rng.below(4)), new_path(1 + rng.below(4));
            for (Asn& a : old_path) a = Asn(1 + rng.below(8));
            for (Asn& a : new_path) a = Asn(1 + rng.below(8));
            event.changes.push_back(
                mk(int64_t(i), Asn(100 + i), "10.0.0.0/8", "10.0.0.0/8", old_path, new_path));
        }
        CHECK(responsible_ases(event) == responsible_oracle(event));
    }
}

TEST_CASE("events close after a quiet window") {
    EventGrouper grouper(10); // 10 second window
    CHECK(grouper.add(mk1(100, 1, "10.0.0.0/8"), 99).empty());
    CHECK(grouper.add(mk1(105, 2, "10.0.0.0/8"), 99).empty()); // same event
    CHECK(grouper.open_events() == 1);

    // 9.999999s after the last member: still open
    ScoredChange probe = mk1(114, 3, "11.0.0.0/8");
    probe.change.t_us = 999999;
    CHECK(grouper.add(probe, 99).empty());
    CHECK(grouper.open_events() == 2);

    // a full window past the first event's last member, but not the second's
    auto closed = grouper.add(mk1(124, 1, "12.0.0.0/8"), 99);
    REQUIRE(closed.size() == 1);
    CHECK(closed[0].announced == pfx("10.0.0.0/8"));
    CHECK(closed[0].changes.size() == 2);
    CHECK(!closed[0].responsible.empty());

    auto rest = grouper.flush();
    CHECK(rest.size() == 2);
    CHECK(grouper.open_events() == 0);
}

TEST_CASE("events are keyed by the full prefix pair") {
    EventGrouper grouper(10);
    grouper.add(mk(0, 1, "10.5.0.0/16", "10.0.0.0/8", {1, 2}, {1, 3}), 99);
    grouper.add(mk(1, 2, "10.5.0.0/16", "10.5.0.0/16", {2, 2}, {2, 3}), 99);
    CHECK(grouper.open_events() == 2); // different conflicting prefix
}

TEST_CASE("vantage spikes inside one window make an event anomalous") {
    // window 10s, threshold 2: three distinct vantages within 10s trip it
    EventGrouper tight(10);
    tight.add(mk1(100, 1, "10.0.0.0/8"), 2);
    tight.add(mk1(104, 2, "10.0.0.0/8"), 2);
    tight.add(mk1(108, 3, "10.0.0.0/8"), 2);
    auto events = tight.flush();
    REQUIRE(events.size() == 1);
    CHECK(events[0].peak_vantages == 3);
    CHECK(events[0].anomalous);

    // the same three vantages spread out never overlap inside one window
    EventGrouper spread(10);
    spread.add(mk1(100, 1, "10.0.0.0/8"), 2);
    spread.add(mk1(109, 2, "10.0.0.0/8"), 2);
    spread.add(mk1(118, 3, "10.0.0.0/8"), 2);
    events = spread.flush();
    REQUIRE(events.size() == 1);
    CHECK(events[0].peak_vantages == 2);
    CHECK(!events[0].anomalous); // threshold is strict

    // repeats of one vantage never count twice
    EventGrouper rep(10);
    rep.add(mk1(100, 1, "10.0.0.0/8"), 1);
    rep.add(mk1(101, 1, "10.0.0.0/8"), 1);
    rep.add(mk1(102, 1, "10.0.0.0/8"), 1);
    events = rep.flush();
    REQUIRE(events.size() == 1);
    CHECK(events[0].peak_vantages == 1);
    CHECK(!events[0].anomalous);
}

TEST_CASE("peak vantage count matches a rescan, randomized") {
    Rng rng(512);
    for (int trial = 0; trial < 100; ++trial) {
        int64_t window_s = 1 + int64_t(rng.below(20));
        EventGrouper grouper(window_s);
        int64_t t = 0;
        std::vector<std::pair<int64_t, Asn>> members; // (usec, vantage)
        std::vector<PrefixEvent> events;
        size_t n = 1 + rng.below(40);
        for (size_t i = 0; i < n; ++i) {
            t += int64_t(rng.below(uint64_t(window_s) * 3000000 / n + 1));
            ScoredChange sc = mk1(t / 1000000, Asn(1 + rng.below(6)), "10.0.0.0/8");
            sc.change.t_us = uint32_t(t % 1000000);
            members.push_back({t, sc.change.vantage});
            auto closed = grouper.add(sc, 1000);
            events.insert(events.end(), closed.begin(), closed.end());
        }
        // brute-force peak: for each arrival, distinct vantages in (t-w, t]
        uint32_t want = 0;
        for (size_t i = 0; i < members.size(); ++i) {
            std::set<Asn> distinct;
            for (size_t j = 0; j <= i; ++j)
                if (members[i].first - members[j].first < window_s * 1000000)
                    distinct.insert(members[j].second);
            want = std::max(want, uint32_t(distinct.size()));
        }
        auto rest = grouper.flush();
        events.insert(events.end(), rest.begin(), rest.end());
        uint32_t got = 0;
        for (const auto& ev : events) got = std::max(got, ev.peak_vantages);
        CHECK(got == want);
    }
}

TEST_CASE("batch grouping equals streaming") {
    Rng rng(77);
    std::vector<ScoredChange> changes;
    int64_t t = 0;
    const char* prefixes[3] = {"10.0.0.0/8", "11.0.0.0/8", "12.0.0.0/8"};
    for (int i = 0; i < 60; ++i) {
        t += int64_t(rng.below(9));
        changes.push_back(mk1(t, Asn(1 + rng.below(4)), prefixes[rng.below(3)]));
    }
    auto batch = group_events(changes, 15, 2);

    EventGrouper grouper(15);
    std::vector<PrefixEvent> streamed;
    for (const auto& sc : changes) {
        auto closed = grouper.add(sc, 2);
        streamed.insert(streamed.end(), closed.begin(), closed.end());
    }
    auto rest = grouper.flush();
    streamed.insert(streamed.end(), rest.begin(), rest.end());

    REQUIRE(batch.size() == streamed.size());
    for (size_t i = 0; i < batch.size(); ++i) {
        CHECK(batch[i].announced == streamed[i].announced);
        CHECK(batch[i].changes.size() == streamed[i].changes.size());
        CHECK(batch[i].peak_vantages == streamed[i].peak_vantages);
        CHECK(batch[i].anomalous == streamed[i].anomalous);
        CHECK(batch[i].responsible == streamed[i].responsible);
    }
}

TEST_CASE("correlation merges overlapping events with shared culprits") {
    auto event = [&](int64_t t0, int64_t t1, const char* prefix, AsPath old_p, AsPath new_p) {
        PrefixEvent ev;
        ev.announced = ev.conflicting = pfx(prefix);
        ev.changes.push_back(mk(t0, 1, prefix, prefix, old_p, new_p));
        ev.changes.push_back(mk(t1, 2, prefix, prefix, old_p, new_p));
        ev.anomalous = true;
        ev.responsible = responsible_ases(ev);
        return ev;
    };

    // two prefixes flipping to the same bad origin 66, overlapping in time
    PrefixEvent a = event(100, 200, "10.0.0.0/8", {1, 2, 50}, {1, 2, 66});
    PrefixEvent b = event(150, 250, "11.0.0.0/8", {1, 3, 51}, {1, 3, 66});
    // same culprit but much later: separate alarm
    PrefixEvent c = event(1000, 1100, "12.0.0.0/8", {1, 4, 52}, {1, 4, 66});
    // overlapping in time but unrelated culprit
    PrefixEvent d = event(120, 180, "13.0.0.0/8", {1, 5, 53}, {1, 5, 77});

    auto alarms = correlate({a, b, c, d});
    REQUIRE(alarms.size() == 3);

    // ids are ordered by start time
    CHECK(alarms[0].start_us == 100 * 1000000);
    CHECK(alarms[0].events.size() == 2);
    CHECK(alarms[0].id == 1);
    CHECK(std::count(alarms[0].responsible.begin(), alarms[0].responsible.end(), 66) == 1);
    CHECK(alarms[0].prefixes.size() == 2);

    CHECK(alarms[1].start_us == 120 * 1000000);
    CHECK(alarms[1].events.size() == 1);
    CHECK(alarms[2].start_us == 1000 * 1000000);
    CHECK(alarms[2].events.size() == 1);
}

TEST_CASE("events with no responsible set stay singletons") {
    PrefixEvent a, b;
    a.announced = a.conflicting = pfx("10.0.0.0/8");
    a.changes.push_back(mk(100, 1, "10.0.0.0/8", "10.0.0.0/8", {1, 2}, {1, 3}));
    a.changes.push_back(mk(110, 2, "10.0.0.0/8", "10.0.0.0/8", {1, 3}, {1, 2}));
    a.responsible = responsible_ases(a); // contradictory changes: empty
    REQUIRE(a.responsible.empty());
    b = a;
    b.changes[0].change.t = 105;

    auto alarms = correlate({a, b});
    CHECK(alarms.size() == 2);
}

TEST_CASE("aggregation ties re-raises of one incident together") {
    auto alarm_with = [&](int64_t start, const char* prefix, std::vector<Asn> responsible) {
        Alarm alarm;
        alarm.start_us = start;
        alarm.end_us = start + 10;
        alarm.prefixes = {pfx(prefix)};
        alarm.responsible = std::move(responsible);
        PrefixEvent ev;
        ev.announced = ev.conflicting = pfx(prefix);
        ev.changes.push_back(mk(start / 1000000, 1, prefix, prefix, {1, 50}, {1, 66}));
        alarm.events.push_back(ev);
        return alarm;
    };

    // same (prefix, culprit) shows up in two windows far apart
    Alarm first = alarm_with(100 * 1000000, "10.0.0.0/8", {66});
    Alarm again = alarm_with(9000 * 1000000, "10.0.0.0/8", {66});
    Alarm other = alarm_with(200 * 1000000, "11.0.0.0/8", {77});

    auto merged = aggregate_alarms({first, again, other});
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].events.size() == 2); // starts at 100s, holds both re-raises
    CHECK(merged[0].id == 1);
    CHECK(merged[1].id == 2);
    CHECK(merged[1].prefixes[0] == pfx("11.0.0.0/8"));
}

TEST_CASE("cdf knee picks the end of the bulk") {
    // the documented pinned example: knee sits at the bulk value
    KneeResult k = knee_of_cdf({1, 1, 1, 1, 8, 9}, -1.0, 4);
    CHECK(k.value == 1.0);
    CHECK(!k.fallback);

    // bulk of small scores with a thin tail
    std::vector<double> sample;
    for (int i = 0; i < 90; ++i) sample.push_back(0.1 + i * 1e-5);
    for (int i = 0; i < 10; ++i) sample.push_back(5.0 + i);
    k = knee_of_cdf(sample, -1.0, 20);
    CHECK(!k.fallback);
    CHECK(k.value >= 0.1);
    CHECK(k.value < 0.101); // inside the bulk, right at its edge
}

TEST_CASE("cdf knee edge cases") {
    // a perfectly uniform ramp has no knee: ties resolve to the smallest
    std::vector<double> ramp;
    for (int i = 0; i < 50; ++i) ramp.push_back(double(i));
    KneeResult k = knee_of_cdf(ramp, -1.0, 20);
    CHECK(k.value == 0.0);
    CHECK(!k.fallback);

    // constant sample knees at the constant
    k = knee_of_cdf(std::vector<double>(30, 2.5), -1.0, 20);
    CHECK(k.value == 2.5);
    CHECK(!k.fallback);

    // too little history: fall back, flagged
    k = knee_of_cdf({1.0, 2.0}, 7.5, 20);
    CHECK(k.value == 7.5);
    CHECK(k.fallback);

    k = knee_of_cdf({}, 7.5, 0);
    CHECK(k.fallback); // fewer than two points can never calibrate
}

TEST_CASE("quantiles of a sample") {
    std::vector<double> v{5, 1, 4, 2, 3};
    CHECK(quantile_of(v, 0.0) == 1.0);
    CHECK(quantile_of(v, 0.5) == 3.0);
    CHECK(quantile_of(v, 1.0) == 5.0);
    CHECK(quantile_of(v, 0.99) == 5.0);
    CHECK(quantile_of({}, 0.5) == 0.0);
}
