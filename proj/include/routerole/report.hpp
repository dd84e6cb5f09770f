#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "routerole/analysis.hpp"
#include "routerole/detector.hpp"
#include "routerole/embedding.hpp"
#include "routerole/pair_cache.hpp"

namespace routerole {

// Case-study export for one alarm: a text summary, one score-matrix dump per
// member change (with the optimal alignment appended), and planar
// coordinates for every AS appearing on the involved paths.
struct AlarmReportPaths {
    std::string text;
    std::vector<std::string> matrices;
    std::string projection;
};

AlarmReportPaths write_alarm_report(const Alarm& alarm, const EmbeddingModel& model,
                                    const std::string& out_dir);

// Whole-model exports behind the `project` command: per-AS planar
// coordinates (hierarchy projection plus a 2-component PCA of the
// rejections) and, when relationship records are supplied, the sorted
// pair-difference values of every named pair set for CDF plotting.
void write_model_projection(const EmbeddingModel& model, std::ostream& out);
void write_pair_set_values(const EmbeddingModel& model, const AsGraph& graph,
                           const std::vector<RelationshipRecord>& records, size_t max_per_set,
                           uint64_t seed, std::ostream& out);

} // namespace routerole
