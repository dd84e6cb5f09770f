#include "routerole/detector.hpp"

#include <algorithm>
#include <set>

namespace routerole {

namespace {

std::set<Asn> path_set(const AsPath& path) { return {path.begin(), path.end()}; }

void intersect_into(std::optional<std::set<Asn>>& acc, std::set<Asn> next) {
    if (!acc) {
        acc = std::move(next);
        return;
    }
    std::set<Asn> merged;
    std::set_intersection(acc->begin(), acc->end(), next.begin(), next.end(),
                          std::inserter(merged, merged.begin()));
    *acc = std::move(merged);
}

} // namespace

std::vector<Asn> responsible_ases(const PrefixEvent& event) {
    std::optional<std::set<Asn>> dropout, popup;
    for (const ScoredChange& sc : event.changes) {
        std::set<Asn> old_set = path_set(sc.change.old_path);
        std::set<Asn> new_set = path_set(sc.change.new_path);
        std::set<Asn> drop, pop;
        std::set_difference(old_set.begin(), old_set.end(), new_set.begin(), new_set.end(),
                            std::inserter(drop, drop.begin()));
        std::set_difference(new_set.begin(), new_set.end(), old_set.begin(), old_set.end(),
                            std::inserter(pop, pop.begin()));
        intersect_into(dropout, std::move(drop));
        intersect_into(popup, std::move(pop));
    }
    std::set<Asn> result;
    if (dropout) result.insert(dropout->begin(), dropout->end());
    if (popup) result.insert(popup->begin(), popup->end());
    return {result.begin(), result.end()};
}

void EventGrouper::finalize(PrefixEvent& event) {
    event.responsible = responsible_ases(event);
}

std::vector<PrefixEvent> EventGrouper::close_due(int64_t now_us) {
    std::vector<PrefixEvent> closed;
    for (auto it = open_.begin(); it != open_.end();) {
        if (now_us - it->second.last_us >= window_us_) {
            finalize(it->second.event);
            closed.push_back(std::move(it->second.event));
            it = open_.erase(it);
        } else {
            ++it;
        }
    }
    // map order is deterministic, so closure order is too
    return closed;
}

std::vector<PrefixEvent> EventGrouper::add(const ScoredChange& sc, uint32_t vantage_threshold) {
    int64_t now = to_usec(sc.change.t, sc.change.t_us);
    std::vector<PrefixEvent> closed = close_due(now);

    auto key = std::make_pair(sc.change.announced, sc.change.conflicting);
    Open& open = open_[key];
    if (open.event.changes.empty()) {
        open.event.announced = sc.change.announced;
        open.event.conflicting = sc.change.conflicting;
    }
    open.event.changes.push_back(sc);
    open.last_us = now;

    // count distinct vantages among member changes inside (now - w, now]
    open.recent.push_back({now, sc.change.vantage});
    ++open.recent_vantages[sc.change.vantage];
    while (now - open.recent.front().first >= window_us_) {
        auto it = open.recent_vantages.find(open.recent.front().second);
        if (--it->second == 0) open.recent_vantages.erase(it);
        open.recent.pop_front();
    }
    uint32_t count = static_cast<uint32_t>(open.recent_vantages.size());
    open.event.peak_vantages = std::max(open.event.peak_vantages, count);
    if (count > vantage_threshold) open.event.anomalous = true;

    return closed;
}

std::vector<PrefixEvent> EventGrouper::flush() {
    std::vector<PrefixEvent> closed;
    for (auto& [key, open] : open_) {
        finalize(open.event);
        closed.push_back(std::move(open.event));
    }
    open_.clear();
    return closed;
}

std::vector<PrefixEvent> group_events(std::vector<ScoredChange> suspicious, int64_t window_s,
                                      uint32_t vantage_threshold) {
    std::stable_sort(suspicious.begin(), suspicious.end(),
                     [](const ScoredChange& a, const ScoredChange& b) {
                         return to_usec(a.change.t, a.change.t_us) <
                                to_usec(b.change.t, b.change.t_us);
                     });
    EventGrouper grouper(window_s);
    std::vector<PrefixEvent> out;
    for (const ScoredChange& sc : suspicious) {
        auto closed = grouper.add(sc, vantage_threshold);
        out.insert(out.end(), std::make_move_iterator(closed.begin()),
                   std::make_move_iterator(closed.end()));
    }
    auto rest = grouper.flush();
    out.insert(out.end(), std::make_move_iterator(rest.begin()),
               std::make_move_iterator(rest.end()));
    return out;
}

namespace {

struct UnionFind {
    std::vector<size_t> parent;
    explicit UnionFind(size_t n) : parent(n) {
        for (size_t i = 0; i < n; ++i) parent[i] = i;
    }
    size_t find(size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

bool ranges_overlap(int64_t s1, int64_t e1, int64_t s2, int64_t e2) {
    return s1 <= e2 && s2 <= e1;
}

bool sorted_intersects(const std::vector<Asn>& a, const std::vector<Asn>& b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j]) ++i;
        else ++j;
    }
    return false;
}

Alarm make_alarm(std::vector<PrefixEvent> events) {
    Alarm alarm;
    std::set<IpPrefix> prefixes;
    std::set<Asn> responsible;
    alarm.start_us = events.front().start_us();
    alarm.end_us = events.front().end_us();
    for (const PrefixEvent& event : events) {
        alarm.start_us = std::min(alarm.start_us, event.start_us());
        alarm.end_us = std::max(alarm.end_us, event.end_us());
        prefixes.insert(event.announced);
        prefixes.insert(event.conflicting);
        responsible.insert(event.responsible.begin(), event.responsible.end());
    }
    alarm.prefixes.assign(prefixes.begin(), prefixes.end());
    alarm.responsible.assign(responsible.begin(), responsible.end());
    alarm.events = std::move(events);
    return alarm;
}

void sort_and_number(std::vector<Alarm>& alarms) {
    std::stable_sort(alarms.begin(), alarms.end(), [](const Alarm& a, const Alarm& b) {
        if (a.start_us != b.start_us) return a.start_us < b.start_us;
        if (a.end_us != b.end_us) return a.end_us < b.end_us;
        return a.prefixes < b.prefixes;
    });
    for (size_t i = 0; i < alarms.size(); ++i) alarms[i].id = i + 1;
}

} // namespace

std::vector<Alarm> correlate(std::vector<PrefixEvent> anomalous_events) {
    const size_t n = anomalous_events.size();
    UnionFind uf(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const PrefixEvent& a = anomalous_events[i];
            const PrefixEvent& b = anomalous_events[j];
            if (ranges_overlap(a.start_us(), a.end_us(), b.start_us(), b.end_us()) &&
                sorted_intersects(a.responsible, b.responsible))
                uf.unite(i, j);
        }
    }
    std::map<size_t, std::vector<PrefixEvent>> groups;
    for (size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(std::move(anomalous_events[i]));

    std::vector<Alarm> alarms;
    alarms.reserve(groups.size());
    for (auto& [root, events] : groups) alarms.push_back(make_alarm(std::move(events)));
    sort_and_number(alarms);
    return alarms;
}

std::vector<Alarm> aggregate_alarms(std::vector<Alarm> alarms) {
    const size_t n = alarms.size();
    UnionFind uf(n);
    std::map<std::pair<IpPrefix, Asn>, size_t> owner;
    for (size_t i = 0; i < n; ++i) {
        for (const IpPrefix& prefix : alarms[i].prefixes) {
            for (Asn asn : alarms[i].responsible) {
                auto [it, inserted] = owner.try_emplace({prefix, asn}, i);
                if (!inserted) uf.unite(i, it->second);
            }
        }
    }
    std::map<size_t, std::vector<PrefixEvent>> groups;
    for (size_t i = 0; i < n; ++i) {
        size_t root = uf.find(i);
        auto& bucket = groups[root];
        bucket.insert(bucket.end(), std::make_move_iterator(alarms[i].events.begin()),
                      std::make_move_iterator(alarms[i].events.end()));
    }
    std::vector<Alarm> merged;
    merged.reserve(groups.size());
    for (auto& [root, events] : groups) merged.push_back(make_alarm(std::move(events)));
    sort_and_number(merged);
    return merged;
}

} // namespace routerole
