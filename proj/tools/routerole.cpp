#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "routerole/as_graph.hpp"
#include "routerole/model_io.hpp"
#include "routerole/perturb.hpp"
#include "routerole/pipeline.hpp"
#include "routerole/relationships.hpp"
#include "routerole/report.hpp"
#include "routerole/synth.hpp"

using namespace routerole;
namespace fs = std::filesystem;

namespace {

struct MissingFile : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_file(const std::string& path) {
    if (path.empty() || !fs::exists(path)) throw MissingFile("missing input file: " + path);
}

RelFileFormat format_from(const std::string& s) {
    if (s == "auto") return RelFileFormat::auto_detect;
    if (s == "caida") return RelFileFormat::caida;
    if (s == "tsv") return RelFileFormat::tsv;
    throw ConfigError("unknown relationship format '" + s + "' (auto|caida|tsv)");
}

int run_train(const std::string& relationships, const std::string& model_out,
              const Hyperparams& hp, const std::string& format) {
    require_file(relationships);
    hp.validate();
    TrainOutcome out = run_training(relationships, model_out, hp, format_from(format));
    std::printf("parsed %llu records (%llu duplicate, %llu conflicting)\n",
                (unsigned long long)out.parse.records, (unsigned long long)out.parse.exact_duplicates,
                (unsigned long long)out.parse.conflicting_duplicates);
    std::printf("graph: %zu ASes, %zu directed edges\n", out.vertices, out.directed_edges);
    const auto& losses = out.report.epoch_mean_loss;
    if (!losses.empty())
        std::printf("epoch loss: %.6f first, %.6f last (%zu epochs, %llu instances)\n",
                    losses.front(), losses.back(), losses.size(),
                    (unsigned long long)out.report.instances);
    std::printf("fingerprint: %016llx\nmodel written to %s\n",
                (unsigned long long)out.fingerprint, model_out.c_str());
    return 0;
}

int run_detect(const std::string& model, const std::string& rib, const std::string& replay,
               const std::string& out_dir, const DetectorConfig& cfg) {
    require_file(model);
    require_file(rib);
    require_file(replay);
    DetectionSummary s = run_detection_files(model, rib, replay, out_dir, cfg);
    std::printf("replayed %llu announcements (%llu parse errors, %llu out of order)\n",
                (unsigned long long)s.replay.records, (unsigned long long)s.replay.parse_errors,
                (unsigned long long)s.replay.skew_rejected);
    std::printf("route changes: %llu, suspicious: %llu, events closed: %llu (anomalous %llu)\n",
                (unsigned long long)s.changes, (unsigned long long)s.suspicious,
                (unsigned long long)s.events_closed, (unsigned long long)s.anomalous_events);
    if (s.distance_fallback)
        std::printf("distance threshold: uncalibrated\n");
    else
        std::printf("distance threshold: %.9g\n", s.distance_threshold);
    std::printf("vantage threshold: %u%s\n", s.vantage_threshold,
                s.vantage_fallback ? " (fallback)" : "");
    std::printf("cache: %llu hits, %llu misses, %llu unknown-pair lookups; %llu path hits, %llu path misses\n",
                (unsigned long long)s.cache.hits, (unsigned long long)s.cache.misses,
                (unsigned long long)s.cache.unknown_pairs, (unsigned long long)s.cache.path_hits,
                (unsigned long long)s.cache.path_misses);
    std::printf("%zu alarms -> %s/alarms.jsonl (%.1fs, %.0f ann/s)\n", s.alarms.size(),
                out_dir.c_str(), s.timing.wall_seconds, s.timing.announcements_per_second);
    return 0;
}

int run_validate(const std::string& alarms, const std::string& roa, const std::string& orgs,
                 const std::string& relationships, const std::string& out_path) {
    require_file(alarms);
    require_file(roa);
    require_file(orgs);
    require_file(relationships);
    ValidationSummary s = run_validation(alarms, roa, orgs, relationships, out_path);
    std::printf("%-6s %-8s %-6s %-6s %-6s %-6s %-5s %s\n", "alarm", "changes", "P1", "P2", "P3",
                "P4", "conf", "dominant");
    static const char* names[4] = {"origin_hijack", "route_leak", "path_manipulation",
                                   "roa_misconfig"};
    for (const auto& r : s.reviews) {
        std::printf("%-6llu %-8u %-6.2f %-6.2f %-6.2f %-6.2f %-5s %s\n",
                    (unsigned long long)r.alarm_id, r.validation.total_changes,
                    r.validation.rate(0), r.validation.rate(1), r.validation.rate(2),
                    r.validation.rate(3), r.validation.high_confidence ? "high" : "low",
                    r.validation.dominant >= 0 ? names[r.validation.dominant] : "-");
    }
    std::printf("%llu alarms, %llu high-confidence, %llu fully legitimate -> %s\n",
                (unsigned long long)s.alarms, (unsigned long long)s.high_confidence,
                (unsigned long long)s.all_legitimate, out_path.c_str());
    return 0;
}

int run_report(const std::string& alarms_path, const std::string& model_path,
               std::optional<uint64_t> id, bool all, const std::string& out_dir) {
    require_file(alarms_path);
    require_file(model_path);
    if (!id && !all) throw ConfigError("pass --id N or --all");
    auto alarms = load_alarms(alarms_path);
    EmbeddingModel model = load_model(model_path);
    bool found = false;
    for (const auto& alarm : alarms) {
        if (!all && alarm.id != *id) continue;
        found = true;
        AlarmReportPaths paths = write_alarm_report(alarm, model, out_dir);
        std::printf("alarm %llu: %s (%zu matrices, %s)\n", (unsigned long long)alarm.id,
                    paths.text.c_str(), paths.matrices.size(), paths.projection.c_str());
    }
    if (!found) throw ConfigError("no alarm with id " + std::to_string(id ? *id : 0));
    return 0;
}

int run_perturb(const std::string& relationships, const std::string& kind, double ratio,
                uint64_t seed, const std::string& usage_path, const std::string& out_path,
                const std::string& format) {
    require_file(relationships);
    NoiseKind nk = noise_kind_from_string(kind);
    auto records = load_relationships(relationships, format_from(format));
    std::optional<RouteUsage> usage;
    if (!usage_path.empty()) {
        require_file(usage_path);
        usage = load_route_usage(usage_path);
    }
    auto noisy = perturb(records, nk, ratio, usage ? &*usage : nullptr, seed);
    save_relationships(out_path, noisy, RelFileFormat::caida);
    std::printf("%zu records in, %zu out -> %s\n", records.size(), noisy.size(), out_path.c_str());
    return 0;
}

int run_project(const std::string& model_path, const std::string& coords_out,
                const std::string& relationships, const std::string& pairs_out,
                size_t max_per_set, uint64_t seed) {
    require_file(model_path);
    EmbeddingModel model = load_model(model_path);
    {
        std::ofstream out(coords_out);
        if (!out) throw IoError("cannot write " + coords_out);
        write_model_projection(model, out);
        std::printf("%zu AS coordinates -> %s\n", model.size(), coords_out.c_str());
    }
    if (!pairs_out.empty()) {
        if (relationships.empty())
            throw ConfigError("--pairs-out needs --relationships for the pair classes");
        require_file(relationships);
        auto records = load_relationships(relationships);
        AsGraph graph = build_graph(records);
        std::ofstream out(pairs_out);
        if (!out) throw IoError("cannot write " + pairs_out);
        write_pair_set_values(model, graph, records, max_per_set, seed, out);
        std::printf("pair-set values -> %s\n", pairs_out.c_str());
    }
    return 0;
}

int run_synth(const SynthSpec& spec, const std::string& out_dir) {
    SynthTopology topo = generate_topology(spec);
    DatasetPaths paths = write_dataset(topo, out_dir);
    std::printf("topology: %zu ASes (%zu tier1, %zu mid, %zu stub), %zu relationship records\n",
                topo.graph.vertex_count(), topo.tier1.size(), topo.mids.size(), topo.stubs.size(),
                topo.records.size());
    std::printf("dataset in %s:\n  %s\n  %s\n  %s\n  %s\n  %s\n  %s\n  %s\n", out_dir.c_str(),
                paths.relationships.c_str(), paths.rib.c_str(), paths.replay.c_str(),
                paths.truth.c_str(), paths.roa.c_str(), paths.orgs.c_str(),
                paths.route_usage.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"AS routing-role embeddings and BGP anomaly detection"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; sections per subcommand");

    // train
    auto* train = app.add_subcommand("train", "learn AS embeddings from a relationship file");
    std::string t_rel, t_model = "model.bin", t_format = "auto";
    Hyperparams hp;
    train->add_option("--relationships", t_rel, "AS relationship file")->required();
    train->add_option("--model", t_model, "output model path");
    train->add_option("--format", t_format, "relationship file format (auto|caida|tsv)");
    train->add_option("--dim", hp.dim, "embedding dimension");
    train->add_option("--epochs", hp.epochs, "training epochs");
    train->add_option("--batch", hp.batch_size, "minibatch size");
    train->add_option("--lr", hp.learning_rate, "learning rate");
    train->add_option("--negatives", hp.negative_samples, "negative samples per edge");
    train->add_option("--weight-floor", hp.weight_floor, "per-dimension weight floor (0 = auto)");
    train->add_option("--seed", hp.seed, "training seed");

    // detect
    auto* detect = app.add_subcommand("detect", "replay announcements and raise alarms");
    std::string d_model, d_rib, d_replay, d_out = "detect_out";
    DetectorConfig dc;
    detect->add_option("--model", d_model, "trained model file")->required();
    detect->add_option("--rib", d_rib, "RIB seed JSONL")->required();
    detect->add_option("--replay", d_replay, "announcement replay JSONL")->required();
    detect->add_option("--out", d_out, "output directory");
    detect->add_option("--window", dc.window_s, "event window / recalibration period, seconds");
    detect->add_option("--lookback", dc.lookback_s, "calibration lookback, seconds");
    detect->add_option("--distance-threshold", dc.distance_threshold,
                       "pin the suspicious-change score threshold");
    detect->add_option("--vantage-threshold", dc.vantage_threshold,
                       "pin the anomalous-event vantage threshold");
    detect->add_option("--unknown-pair-score", dc.unknown_pair_score,
                       "pin the score charged for pairs with unknown ASes");
    detect->add_option("--vantage-fallback", dc.vantage_fallback,
                       "vantage threshold before calibration history exists");
    detect->add_option("--min-calibration-samples", dc.min_calibration_samples,
                       "history size required before a knee is trusted");
    detect->add_option("--skew", dc.skew_allowance_s, "tolerated timestamp regression, seconds");
    detect->add_flag("!--no-collapse-prepend", dc.collapse_prepend,
                     "keep consecutive duplicate ASNs in paths");

    // validate
    auto* validate = app.add_subcommand("validate", "classify alarms against ROA/org data");
    std::string v_alarms, v_roa, v_orgs, v_rel, v_out = "validated.jsonl";
    validate->add_option("--alarms", v_alarms, "alarms JSONL from detect")->required();
    validate->add_option("--roa", v_roa, "ROA csv (prefix,max_length,asn)")->required();
    validate->add_option("--orgs", v_orgs, "org tsv (asn<TAB>org)")->required();
    validate->add_option("--relationships", v_rel, "AS relationship file")->required();
    validate->add_option("--out", v_out, "annotated alarm output");

    // report
    auto* report = app.add_subcommand("report", "case-study export for one alarm");
    std::string r_alarms, r_model, r_out = "report_out";
    std::optional<uint64_t> r_id;
    bool r_all = false;
    report->add_option("--alarms", r_alarms, "alarms JSONL")->required();
    report->add_option("--model", r_model, "trained model file")->required();
    report->add_option("--id", r_id, "alarm id to report");
    report->add_flag("--all", r_all, "report every alarm");
    report->add_option("--out", r_out, "output directory");

    // perturb
    auto* perturb_cmd = app.add_subcommand("perturb", "apply relationship noise models");
    std::string p_rel, p_kind, p_usage, p_out = "perturbed.txt", p_format = "auto";
    double p_ratio = 5.0;
    uint64_t p_seed = 1;
    perturb_cmd->add_option("--relationships", p_rel, "AS relationship file")->required();
    perturb_cmd->add_option("--kind", p_kind, "R1|R2|W1|W2 (random/weighted flip/delete)")
        ->required();
    perturb_cmd->add_option("--ratio", p_ratio, "percent of records to touch");
    perturb_cmd->add_option("--seed", p_seed, "selection seed (random kinds)");
    perturb_cmd->add_option("--route-usage", p_usage, "per-link route counts (weighted kinds)");
    perturb_cmd->add_option("--out", p_out, "output path");
    perturb_cmd->add_option("--format", p_format, "input format (auto|caida|tsv)");

    // project
    auto* project = app.add_subcommand("project", "export planar embedding coordinates");
    std::string j_model, j_out = "coords.csv", j_rel, j_pairs;
    size_t j_max = 2000;
    uint64_t j_seed = 1;
    project->add_option("--model", j_model, "trained model file")->required();
    project->add_option("--out", j_out, "coordinate csv");
    project->add_option("--relationships", j_rel, "relationship file for pair classes");
    project->add_option("--pairs-out", j_pairs, "pair-set difference values csv");
    project->add_option("--max-per-set", j_max, "sample cap per pair class");
    project->add_option("--seed", j_seed, "sampling seed");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic topology and replay");
    SynthSpec spec;
    std::string s_out = "synth_out";
    synth->add_option("--out", s_out, "dataset directory");
    synth->add_option("--seed", spec.seed, "generator seed");
    synth->add_option("--tier1", spec.tier1_count, "tier1 AS count");
    synth->add_option("--mids", spec.mid_count, "mid-tier AS count");
    synth->add_option("--stubs", spec.stub_count, "stub AS count");
    synth->add_option("--multihomed-pct", spec.multihomed_percent, "percent of stubs multihomed");
    synth->add_option("--sibling-pairs", spec.sibling_pairs, "same-org stub pairs");
    synth->add_option("--extra-peering", spec.extra_peering, "probability of extra lateral peering");
    synth->add_option("--start", spec.start_t, "replay start time (unix seconds)");
    synth->add_option("--duration", spec.duration_s, "replay length, seconds");
    synth->add_option("--announcements", spec.target_announcements, "announcement budget");
    synth->add_option("--anomalies", spec.anomaly_count, "injected anomaly count");
    synth->add_option("--first-anomaly", spec.first_anomaly_s, "offset of first anomaly, seconds");
    synth->add_option("--spacing", spec.anomaly_spacing_s, "anomaly spacing, seconds");
    synth->add_option("--anomaly-duration", spec.anomaly_duration_s, "anomaly length, seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : int(ExitCode::usage);
    }

    try {
        if (*train) return run_train(t_rel, t_model, hp, t_format);
        if (*detect) return run_detect(d_model, d_rib, d_replay, d_out, dc);
        if (*validate) return run_validate(v_alarms, v_roa, v_orgs, v_rel, v_out);
        if (*report) return run_report(r_alarms, r_model, r_id, r_all, r_out);
        if (*perturb_cmd) return run_perturb(p_rel, p_kind, p_ratio, p_seed, p_usage, p_out, p_format);
        if (*project) return run_project(j_model, j_out, j_rel, j_pairs, j_max, j_seed);
        if (*synth) return run_synth(spec, s_out);
    } catch (const MissingFile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::missing_input);
    } catch (const MalformedLine& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::parse_error);
    } catch (const BadPrefix& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::parse_error);
    } catch (const CorruptModel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::parse_error);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::parse_error);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::usage);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::io);
    } catch (const Error& e) {
        // contract violations: empty inputs, AS_SETs, unknown ASNs, bad hyperparameters
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::contract);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return int(ExitCode::internal);
    }
    return 0;
}
