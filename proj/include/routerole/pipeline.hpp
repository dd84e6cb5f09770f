#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "routerole/config.hpp"
#include "routerole/detector.hpp"
#include "routerole/embedding.hpp"
#include "routerole/pair_cache.hpp"
#include "routerole/relationships.hpp"
#include "routerole/replay.hpp"
#include "routerole/trainer.hpp"
#include "routerole/validator.hpp"

namespace routerole {

// --- training ------------------------------------------------------------------

struct TrainOutcome {
    ParseStats parse;
    size_t vertices = 0;
    size_t directed_edges = 0;
    TrainReport report;
    uint64_t fingerprint = 0;
};

// Relationships file in, model file out.
TrainOutcome run_training(const std::string& relationships_path, const std::string& model_path,
                          const Hyperparams& hp,
                          RelFileFormat format = RelFileFormat::auto_detect);

// --- detection -----------------------------------------------------------------

struct TimingSummary {
    double wall_seconds = 0.0;
    double announcements_per_second = 0.0;
    // Per-change processing time in microseconds, chunked by 1000 changes.
    std::vector<double> chunk_us;
    double cold_chunk_us = 0.0;   // first chunk
    double steady_chunk_us = 0.0; // median of the later half
    // (bucket start second, changes, mean microseconds per change)
    std::vector<std::array<double, 3>> buckets;
};

struct DetectionSummary {
    ReplayStats replay;
    RoutingMonitor::Stats monitor;
    uint64_t malformed = 0;  // announcements the monitor rejected
    uint64_t changes = 0;
    uint64_t suspicious = 0;
    uint64_t events_closed = 0;
    uint64_t anomalous_events = 0;
    uint64_t windows = 0;

    double distance_threshold = 0.0; // +inf while uncalibrated
    bool distance_fallback = true;
    uint32_t vantage_threshold = 0;
    bool vantage_fallback = true;
    double unknown_score = 0.0;
    PairDiffCache::Stats cache;

    std::vector<Alarm> alarms;
    TimingSummary timing; // wall-clock side channel, never part of compared output
};

// Replays announcements against the seeded monitor, scores route changes with
// the model, calibrates thresholds at window boundaries and groups the
// suspicious changes into alarms.
DetectionSummary run_detection(const EmbeddingModel& model, const std::string& rib_path,
                               std::istream& replay, const DetectorConfig& cfg);

// File-level wrapper: writes alarms.jsonl, metrics.json and timings.json
// under out_dir. Everything under metrics/alarms is deterministic for a
// given input; timings.json is the only file that is not.
DetectionSummary run_detection_files(const std::string& model_path, const std::string& rib_path,
                                     const std::string& replay_path, const std::string& out_dir,
                                     const DetectorConfig& cfg);

void write_alarms(std::ostream& out, const std::vector<Alarm>& alarms);
std::vector<Alarm> read_alarms(std::istream& in);
std::vector<Alarm> load_alarms(const std::string& path);

// --- validation ----------------------------------------------------------------

struct AlarmReview {
    uint64_t alarm_id = 0;
    AlarmValidation validation;
    uint32_t legitimate_changes = 0;
    uint32_t total_changes = 0;
};

struct ValidationSummary {
    uint64_t alarms = 0;
    uint64_t high_confidence = 0;
    std::array<uint64_t, 4> dominant_counts{}; // by pattern index
    uint64_t all_legitimate = 0;
    std::vector<AlarmReview> reviews;
};

// Reads alarms, classifies each against ROAs / org data / the relationship
// graph, and writes one JSON line per alarm with the verdict attached.
ValidationSummary run_validation(const std::string& alarms_path, const std::string& roa_path,
                                 const std::string& orgs_path,
                                 const std::string& relationships_path,
                                 const std::string& out_path);

} // namespace routerole
