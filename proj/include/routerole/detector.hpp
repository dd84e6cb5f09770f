#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "routerole/monitor.hpp"

namespace routerole {

struct ScoredChange {
    RouteChange change;
    double score = 0.0;
};

// Suspicious changes for the same (announced, conflicting) prefix pair,
// grouped while they keep arriving within the event window of each other.
struct PrefixEvent {
    IpPrefix announced;
    IpPrefix conflicting;
    std::vector<ScoredChange> changes; // in arrival order
    // Highest number of distinct vantages packed inside one window; the
    // event counts as anomalous as soon as this exceeded the vantage
    // threshold at some arrival.
    uint32_t peak_vantages = 0;
    bool anomalous = false;
    std::vector<Asn> responsible; // sorted; filled on close

    int64_t start_us() const { return to_usec(changes.front().change.t, changes.front().change.t_us); }
    int64_t end_us() const { return to_usec(changes.back().change.t, changes.back().change.t_us); }
};

// ASes that plausibly caused an event: those that left every member change's
// old path (dropouts) plus those that entered every new path (pop-ups).
std::vector<Asn> responsible_ases(const PrefixEvent& event);

// Streaming grouper. Changes must arrive in time order; an event closes once
// its prefix pair has been quiet for a full window. add() hands back any
// events that closing became due, flush() the rest.
class EventGrouper {
public:
    explicit EventGrouper(int64_t window_s) : window_us_(window_s * 1000000) {}

    std::vector<PrefixEvent> add(const ScoredChange& sc, uint32_t vantage_threshold);
    std::vector<PrefixEvent> flush();

    size_t open_events() const { return open_.size(); }

    template <typename Fn>
    void for_each_open(Fn&& fn) const {
        for (const auto& [key, open] : open_) fn(open.event);
    }

private:
    struct Open {
        PrefixEvent event;
        int64_t last_us = 0;
        // sliding tail of member (time, vantage) pairs still inside the
        // window, with per-vantage counts, so the distinct-vantage test does
        // not rescan the whole event on every arrival
        std::deque<std::pair<int64_t, Asn>> recent;
        std::map<Asn, uint32_t> recent_vantages;
    };
    std::vector<PrefixEvent> close_due(int64_t now_us);
    static void finalize(PrefixEvent& event);

    int64_t window_us_;
    std::map<std::pair<IpPrefix, IpPrefix>, Open> open_;
};

// One-shot grouping of a time-sorted batch (testing / offline use).
std::vector<PrefixEvent> group_events(std::vector<ScoredChange> suspicious, int64_t window_s,
                                      uint32_t vantage_threshold);

// An alarm is a maximal set of anomalous events connected by "overlapping
// time ranges and shared responsible ASes".
struct Alarm {
    uint64_t id = 0;
    int64_t start_us = 0;
    int64_t end_us = 0;
    std::vector<IpPrefix> prefixes;  // sorted unique over member events
    std::vector<Asn> responsible;    // sorted union
    std::vector<PrefixEvent> events;
};

// Partitions anomalous events into alarms (connected components). Events
// with an empty responsible set stay singletons.
std::vector<Alarm> correlate(std::vector<PrefixEvent> anomalous_events);

// Merges alarms that share a (prefix, responsible AS) pair, transitively;
// used to tie together re-raises of the same incident across detection
// windows. Ids are renumbered in (start, end, first prefix) order.
std::vector<Alarm> aggregate_alarms(std::vector<Alarm> alarms);

} // namespace routerole
