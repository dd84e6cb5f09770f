#include "routerole/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "routerole/as_graph.hpp"
#include "routerole/kneedle.hpp"
#include "routerole/model_io.hpp"
#include "routerole/path_diff.hpp"

namespace routerole {

using nlohmann::json;

TrainOutcome run_training(const std::string& relationships_path, const std::string& model_path,
                          const Hyperparams& hp, RelFileFormat format) {
    TrainOutcome out;
    auto records = load_relationships(relationships_path, format, &out.parse);
    AsGraph graph = build_graph(records);
    out.vertices = graph.vertex_count();
    out.directed_edges = graph.edge_count();
    EmbeddingModel model = train(graph, hp, &out.report);
    out.fingerprint = training_fingerprint(graph, hp);
    save_model(model_path, model);
    return out;
}

namespace {

double change_score(PairDiffCache& cache, const RouteChange& change) {
    if (change.old_path.empty() || change.new_path.empty()) return 0.0;
    if (auto memo = cache.path_score(change.old_path, change.new_path)) return *memo;
    uint64_t unknown_before = cache.stats().unknown_pairs;
    double score = path_diff_score([&](Asn u, Asn v) { return cached_pair_diff(cache, u, v); },
                                   change.old_path, change.new_path);
    // a score built on the unknown-pair sentinel goes stale when the
    // sentinel recalibrates, so only settled path pairs are memoized
    if (cache.stats().unknown_pairs == unknown_before)
        cache.store_path_score(change.old_path, change.new_path, score);
    return score;
}

json path_to_json(const AsPath& p) { return json(p); }

json change_to_json(const ScoredChange& sc) {
    const RouteChange& c = sc.change;
    return json{{"seq", c.seq},
                {"ann_index", c.ann_index},
                {"t", c.t},
                {"t_us", c.t_us},
                {"vantage", c.vantage},
                {"announced", c.announced.to_string()},
                {"conflicting", c.conflicting.to_string()},
                {"old_path", path_to_json(c.old_path)},
                {"new_path", path_to_json(c.new_path)},
                {"score", sc.score}};
}

ScoredChange change_from_json(const json& j) {
    ScoredChange sc;
    RouteChange& c = sc.change;
    c.seq = j.at("seq").get<uint64_t>();
    c.ann_index = j.at("ann_index").get<uint64_t>();
    c.t = j.at("t").get<int64_t>();
    c.t_us = j.at("t_us").get<uint32_t>();
    c.vantage = j.at("vantage").get<Asn>();
    c.announced = IpPrefix::parse(j.at("announced").get<std::string>());
    c.conflicting = IpPrefix::parse(j.at("conflicting").get<std::string>());
    c.old_path = j.at("old_path").get<AsPath>();
    c.new_path = j.at("new_path").get<AsPath>();
    sc.score = j.at("score").get<double>();
    return sc;
}

json event_to_json(const PrefixEvent& e) {
    json changes = json::array();
    for (const auto& sc : e.changes) changes.push_back(change_to_json(sc));
    return json{{"announced", e.announced.to_string()},
                {"conflicting", e.conflicting.to_string()},
                {"peak_vantages", e.peak_vantages},
                {"anomalous", e.anomalous},
                {"responsible", e.responsible},
                {"changes", std::move(changes)}};
}

PrefixEvent event_from_json(const json& j) {
    PrefixEvent e;
    e.announced = IpPrefix::parse(j.at("announced").get<std::string>());
    e.conflicting = IpPrefix::parse(j.at("conflicting").get<std::string>());
    e.peak_vantages = j.at("peak_vantages").get<uint32_t>();
    e.anomalous = j.at("anomalous").get<bool>();
    e.responsible = j.at("responsible").get<std::vector<Asn>>();
    for (const auto& cj : j.at("changes")) e.changes.push_back(change_from_json(cj));
    return e;
}

json alarm_to_json(const Alarm& a) {
    json prefixes = json::array();
    for (const auto& p : a.prefixes) prefixes.push_back(p.to_string());
    json events = json::array();
    for (const auto& e : a.events) events.push_back(event_to_json(e));
    return json{{"id", a.id},
                {"start_us", a.start_us},
                {"end_us", a.end_us},
                {"prefixes", std::move(prefixes)},
                {"responsible", a.responsible},
                {"events", std::move(events)}};
}

Alarm alarm_from_json(const json& j) {
    Alarm a;
    a.id = j.at("id").get<uint64_t>();
    a.start_us = j.at("start_us").get<int64_t>();
    a.end_us = j.at("end_us").get<int64_t>();
    for (const auto& pj : j.at("prefixes")) a.prefixes.push_back(IpPrefix::parse(pj.get<std::string>()));
    a.responsible = j.at("responsible").get<std::vector<Asn>>();
    for (const auto& ej : j.at("events")) a.events.push_back(event_from_json(ej));
    return a;
}

} // namespace

void write_alarms(std::ostream& out, const std::vector<Alarm>& alarms) {
    for (const auto& a : alarms) out << alarm_to_json(a).dump() << '\n';
}

std::vector<Alarm> read_alarms(std::istream& in) {
    std::vector<Alarm> alarms;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            alarms.push_back(alarm_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw MalformedLine("alarms", line_no, e.what());
        }
    }
    return alarms;
}

std::vector<Alarm> load_alarms(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_alarms(in);
}

DetectionSummary run_detection(const EmbeddingModel& model, const std::string& rib_path,
                               std::istream& replay, const DetectorConfig& cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;

    DetectionSummary out;
    PairDiffCache cache(model);
    cache.set_unknown_score(cfg.unknown_pair_score ? *cfg.unknown_pair_score
                                                   : cfg.unknown_fallback);

    RoutingMonitor monitor({cfg.collapse_prepend});
    load_rib_seed(rib_path, monitor, nullptr);

    EventGrouper grouper(cfg.window_s);
    const int64_t window_us = cfg.window_s * 1000000;
    const int64_t lookback_us = cfg.lookback_s * 1000000;
    const double inf = std::numeric_limits<double>::infinity();

    double th_d = cfg.distance_threshold.value_or(inf);
    bool th_d_fallback = !cfg.distance_threshold;
    uint32_t th_v = cfg.vantage_threshold.value_or(cfg.vantage_fallback);
    bool th_v_fallback = !cfg.vantage_threshold;
    double sentinel = cfg.unknown_pair_score.value_or(cfg.unknown_fallback);

    std::deque<std::pair<int64_t, double>> score_hist;      // (usec, change score)
    std::deque<std::pair<int64_t, double>> event_hist;      // (usec closed, peak vantages)
    std::vector<PrefixEvent> pending;                       // anomalous, closed, uncorrelated
    std::vector<Alarm> alarms;

    auto recalibrate = [&](int64_t boundary_us) {
        while (!score_hist.empty() && score_hist.front().first < boundary_us - lookback_us)
            score_hist.pop_front();
        while (!event_hist.empty() && event_hist.front().first < boundary_us - lookback_us)
            event_hist.pop_front();

        if (!cfg.distance_threshold) {
            std::vector<double> scores;
            scores.reserve(score_hist.size());
            for (const auto& [us, s] : score_hist) {
                (void)us;
                scores.push_back(s);
            }
            // Open events haven't been judged yet; until one trips the
            // vantage threshold its scores still describe ordinary churn, so
            // they take part in calibration transiently. Without them a busy
            // prefix whose event never goes quiet would starve the knee.
            grouper.for_each_open([&](const PrefixEvent& ev) {
                if (ev.anomalous) return;
                for (const ScoredChange& sc : ev.changes) {
                    int64_t us = to_usec(sc.change.t, sc.change.t_us);
                    if (us >= boundary_us - lookback_us) scores.push_back(sc.score);
                }
            });
            KneeResult knee = knee_of_cdf(scores, inf, cfg.min_calibration_samples);
            th_d = knee.value;
            th_d_fallback = knee.fallback;
            if (!cfg.unknown_pair_score) {
                sentinel = scores.size() >= cfg.min_calibration_samples
                               ? quantile_of(scores, 0.99)
                               : cfg.unknown_fallback;
                cache.set_unknown_score(sentinel);
            }
        }
        if (!cfg.vantage_threshold) {
            std::vector<double> peaks;
            peaks.reserve(event_hist.size());
            for (const auto& [us, p] : event_hist) {
                (void)us;
                peaks.push_back(p);
            }
            KneeResult knee = knee_of_cdf(peaks, double(cfg.vantage_fallback),
                                          cfg.min_calibration_samples);
            th_v = uint32_t(std::ceil(knee.value));
            th_v_fallback = knee.fallback;
        }
        if (!pending.empty()) {
            auto fresh = correlate(std::move(pending));
            pending.clear();
            alarms.insert(alarms.end(), std::make_move_iterator(fresh.begin()),
                          std::make_move_iterator(fresh.end()));
            alarms = aggregate_alarms(std::move(alarms));
        }
        ++out.windows;
    };

    // Scores of changes that joined an event are withheld from calibration
    // until the event closes, and are dropped outright when it closes
    // anomalous. Feeding confirmed incidents back into the knee would raise
    // the bar for the very anomalies that follow them; single-vantage noise
    // bursts still close ordinary and teach the calibrator about regime
    // shifts.
    auto on_closed = [&](std::vector<PrefixEvent> closed, int64_t now_us) {
        for (auto& ev : closed) {
            ++out.events_closed;
            if (ev.anomalous) {
                ++out.anomalous_events;
                pending.push_back(std::move(ev));
                continue;
            }
            event_hist.push_back({now_us, double(ev.peak_vantages)});
            for (const ScoredChange& sc : ev.changes) score_hist.push_back({now_us, sc.score});
        }
    };

    // Per-change cost is tracked in chunks of 1000 so cache warm-up is
    // visible; the wall clock around the whole loop gives the sustained rate.
    constexpr uint64_t kChunk = 1000;
    uint64_t chunk_fill = 0;
    double chunk_ns = 0;
    std::map<int64_t, std::pair<uint64_t, double>> buckets; // 15-min bucket -> (changes, ns)

    ReplayReader reader(replay, cfg.skew_allowance_s);
    std::optional<int64_t> next_boundary;
    int64_t last_us = 0;
    auto wall_start = clock::now();

    while (auto ann = reader.next()) {
        int64_t now_us = to_usec(ann->t, ann->t_us);
        last_us = now_us;
        if (!next_boundary) next_boundary = now_us + window_us;
        while (now_us >= *next_boundary) {
            recalibrate(*next_boundary);
            *next_boundary += window_us;
        }

        std::optional<RouteChange> change;
        try {
            change = monitor.apply(*ann);
        } catch (const MalformedAnnouncement&) {
            ++out.malformed;
            continue;
        }
        if (!change) continue;

        auto t0 = clock::now();
        double score = change_score(cache, *change);
        ++out.changes;
        if (score > th_d) {
            ++out.suspicious;
            on_closed(grouper.add({*change, score}, th_v), now_us);
        } else {
            score_hist.push_back({now_us, score});
        }
        auto t1 = clock::now();
        double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
        chunk_ns += ns;
        if (++chunk_fill == kChunk) {
            out.timing.chunk_us.push_back(chunk_ns / 1000.0);
            chunk_fill = 0;
            chunk_ns = 0;
        }
        auto& bucket = buckets[ann->t - ann->t % 900];
        ++bucket.first;
        bucket.second += ns;
    }

    on_closed(grouper.flush(), last_us);
    if (!pending.empty()) {
        auto fresh = correlate(std::move(pending));
        pending.clear();
        alarms.insert(alarms.end(), std::make_move_iterator(fresh.begin()),
                      std::make_move_iterator(fresh.end()));
    }
    out.alarms = aggregate_alarms(std::move(alarms));

    auto wall_end = clock::now();
    out.timing.wall_seconds = std::chrono::duration<double>(wall_end - wall_start).count();
    out.replay = reader.stats();
    out.monitor = monitor.stats();
    out.cache = cache.stats();
    out.distance_threshold = th_d;
    out.distance_fallback = th_d_fallback;
    out.vantage_threshold = th_v;
    out.vantage_fallback = th_v_fallback;
    out.unknown_score = sentinel;
    if (out.timing.wall_seconds > 0)
        out.timing.announcements_per_second = double(out.replay.records) / out.timing.wall_seconds;
    if (chunk_fill) out.timing.chunk_us.push_back(chunk_ns / 1000.0);
    if (!out.timing.chunk_us.empty()) {
        out.timing.cold_chunk_us = out.timing.chunk_us.front();
        std::vector<double> tail(out.timing.chunk_us.begin() + out.timing.chunk_us.size() / 2,
                                 out.timing.chunk_us.end());
        std::sort(tail.begin(), tail.end());
        out.timing.steady_chunk_us = tail[tail.size() / 2];
    }
    for (const auto& [start, cn] : buckets)
        out.timing.buckets.push_back({double(start), double(cn.first),
                                      cn.first ? cn.second / (1000.0 * double(cn.first)) : 0.0});
    return out;
}

namespace {

json metrics_to_json(const DetectionSummary& s) {
    json thresholds{{"distance_fallback", s.distance_fallback},
                    {"vantage_threshold", s.vantage_threshold},
                    {"vantage_fallback", s.vantage_fallback},
                    {"unknown_pair_score", s.unknown_score}};
    // +inf is not representable in JSON; null marks "calibration never ran"
    if (std::isfinite(s.distance_threshold))
        thresholds["distance_threshold"] = s.distance_threshold;
    else
        thresholds["distance_threshold"] = nullptr;
    return json{
        {"replay",
         {{"lines", s.replay.lines},
          {"records", s.replay.records},
          {"parse_errors", s.replay.parse_errors},
          {"skew_rejected", s.replay.skew_rejected}}},
        {"monitor",
         {{"announcements", s.monitor.announcements},
          {"withdrawals", s.monitor.withdrawals},
          {"changes", s.monitor.changes},
          {"default_routes_ignored", s.monitor.default_routes_ignored},
          {"rib_entries", s.monitor.rib_entries},
          {"rib_duplicates", s.monitor.rib_duplicates},
          {"malformed", s.malformed}}},
        {"detector",
         {{"changes", s.changes},
          {"suspicious", s.suspicious},
          {"events_closed", s.events_closed},
          {"anomalous_events", s.anomalous_events},
          {"windows", s.windows},
          {"alarms", s.alarms.size()}}},
        {"thresholds", std::move(thresholds)},
        {"cache",
         {{"hits", s.cache.hits},
          {"misses", s.cache.misses},
          {"unknown_pairs", s.cache.unknown_pairs},
          {"path_hits", s.cache.path_hits},
          {"path_misses", s.cache.path_misses}}}};
}

json timings_to_json(const TimingSummary& t) {
    json buckets = json::array();
    for (const auto& b : t.buckets)
        buckets.push_back({{"start", int64_t(b[0])}, {"changes", uint64_t(b[1])}, {"us_per_change", b[2]}});
    return json{{"wall_seconds", t.wall_seconds},
                {"announcements_per_second", t.announcements_per_second},
                {"cold_chunk_us", t.cold_chunk_us},
                {"steady_chunk_us", t.steady_chunk_us},
                {"chunk_us", t.chunk_us},
                {"buckets", std::move(buckets)}};
}

} // namespace

DetectionSummary run_detection_files(const std::string& model_path, const std::string& rib_path,
                                     const std::string& replay_path, const std::string& out_dir,
                                     const DetectorConfig& cfg) {
    EmbeddingModel model = load_model(model_path);
    std::ifstream replay(replay_path);
    if (!replay) throw IoError("cannot open " + replay_path);

    DetectionSummary summary = run_detection(model, rib_path, replay, cfg);

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir + "/alarms.jsonl");
        if (!out) throw IoError("cannot write " + out_dir + "/alarms.jsonl");
        write_alarms(out, summary.alarms);
    }
    {
        std::ofstream out(out_dir + "/metrics.json");
        if (!out) throw IoError("cannot write " + out_dir + "/metrics.json");
        out << metrics_to_json(summary).dump(2) << '\n';
    }
    {
        std::ofstream out(out_dir + "/timings.json");
        if (!out) throw IoError("cannot write " + out_dir + "/timings.json");
        out << timings_to_json(summary.timing).dump(2) << '\n';
    }
    return summary;
}

ValidationSummary run_validation(const std::string& alarms_path, const std::string& roa_path,
                                 const std::string& orgs_path,
                                 const std::string& relationships_path,
                                 const std::string& out_path) {
    auto alarms = load_alarms(alarms_path);
    RoaTable roas = RoaTable::load_csv(roa_path);
    OrgTable orgs = OrgTable::load_tsv(orgs_path);
    AsGraph graph = build_graph(load_relationships(relationships_path));

    static const char* kPatternNames[4] = {"origin_hijack", "route_leak", "path_manipulation",
                                           "roa_misconfig"};

    ValidationSummary sum;
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);

    for (const auto& alarm : alarms) {
        AlarmReview review;
        review.alarm_id = alarm.id;
        review.validation = classify_alarm(alarm, roas, orgs, graph);
        for (const auto& ev : alarm.events)
            for (const auto& sc : ev.changes) {
                ++review.total_changes;
                if (label_legitimate(sc.change, orgs)) ++review.legitimate_changes;
            }

        json verdict{{"total_changes", review.validation.total_changes},
                     {"high_confidence", review.validation.high_confidence},
                     {"legitimate_changes", review.legitimate_changes},
                     {"all_legitimate", review.total_changes > 0 &&
                                            review.legitimate_changes == review.total_changes}};
        json counts, rates;
        for (size_t i = 0; i < 4; ++i) {
            counts[kPatternNames[i]] = review.validation.counts[i];
            rates[kPatternNames[i]] = review.validation.rate(i);
        }
        verdict["counts"] = std::move(counts);
        verdict["explanatory_power"] = std::move(rates);
        verdict["dominant"] = review.validation.dominant >= 0
                                  ? json(kPatternNames[review.validation.dominant])
                                  : json(nullptr);

        json line = alarm_to_json(alarm);
        line["validation"] = std::move(verdict);
        out << line.dump() << '\n';

        ++sum.alarms;
        if (review.validation.high_confidence) ++sum.high_confidence;
        if (review.validation.dominant >= 0) ++sum.dominant_counts[review.validation.dominant];
        if (review.total_changes && review.legitimate_changes == review.total_changes)
            ++sum.all_legitimate;
        sum.reviews.push_back(std::move(review));
    }
    return sum;
}

} // namespace routerole
