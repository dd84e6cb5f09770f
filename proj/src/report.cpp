#include "routerole/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "routerole/path_diff.hpp"

namespace routerole {

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_path(std::ostream& out, const AsPath& p) {
    for (size_t i = 0; i < p.size(); ++i) out << (i ? " " : "") << p[i];
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

} // namespace

AlarmReportPaths write_alarm_report(const Alarm& alarm, const EmbeddingModel& model,
                                    const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::string stem = out_dir + "/alarm" + std::to_string(alarm.id);

    PairDiffCache cache(model);
    cache.set_unknown_score(1.0); // unknown ASes still get a matrix, flagged below

    AlarmReportPaths paths;
    paths.text = stem + ".txt";
    auto text = open_out(paths.text);

    std::set<Asn> involved;
    text << "alarm " << alarm.id << "\n";
    text << "  span: " << alarm.start_us << " .. " << alarm.end_us << " us\n";
    text << "  prefixes:";
    for (const auto& p : alarm.prefixes) text << ' ' << p.to_string();
    text << "\n  responsible:";
    for (Asn as : alarm.responsible) text << ' ' << as;
    text << "\n  events: " << alarm.events.size() << "\n";

    for (size_t ei = 0; ei < alarm.events.size(); ++ei) {
        const PrefixEvent& ev = alarm.events[ei];
        text << "  event " << ei + 1 << ": announced " << ev.announced.to_string()
             << " conflicting " << ev.conflicting.to_string() << " peak_vantages "
             << ev.peak_vantages << (ev.anomalous ? " anomalous" : "") << "\n";
        for (const auto& sc : ev.changes) {
            const RouteChange& c = sc.change;
            for (Asn as : c.old_path) involved.insert(as);
            for (Asn as : c.new_path) involved.insert(as);

            DiffMatrix dp;
            Alignment alignment;
            path_diff_score([&](Asn u, Asn v) { return cached_pair_diff(cache, u, v); },
                            c.old_path, c.new_path, &dp, &alignment);

            std::string mpath =
                stem + "_change" + std::to_string(c.seq) + "_diff.tsv";
            auto mout = open_out(mpath);
            mout << "# old:";
            for (Asn as : c.old_path) mout << ' ' << as;
            mout << "\n# new:";
            for (Asn as : c.new_path) mout << ' ' << as;
            mout << '\n';
            for (size_t i = 0; i < dp.rows; ++i) {
                for (size_t j = 0; j < dp.cols; ++j) mout << (j ? "\t" : "") << fmt(dp.at(i, j));
                mout << '\n';
            }
            mout << "# alignment\n";
            for (const auto& [i, j] : alignment) mout << i << '\t' << j << '\n';
            paths.matrices.push_back(mpath);

            text << "    change seq=" << c.seq << " vantage=" << c.vantage << " t=" << c.t
                 << " score=" << fmt(sc.score) << "\n      old: ";
            write_path(text, c.old_path);
            text << "\n      new: ";
            write_path(text, c.new_path);
            text << "\n      matrix: " << mpath << "\n";
        }
    }

    // Planar coordinates for the ASes on the involved paths: signed position
    // along the hierarchy direction plus a PCA plane of the rejections.
    paths.projection = stem + "_projection.csv";
    auto proj = open_out(paths.projection);
    proj << "asn,hierarchy,pc1,pc2\n";
    std::vector<Asn> known;
    std::vector<std::vector<double>> rows;
    for (Asn as : involved)
        if (model.contains(as)) {
            known.push_back(as);
            rows.push_back(model.rejection(as));
        } else {
            text << "  note: AS " << as << " is not in the model\n";
        }
    auto coords = pca2(rows);
    for (size_t i = 0; i < known.size(); ++i)
        proj << known[i] << ',' << fmt(model.hierarchy_projection(known[i])) << ','
             << fmt(coords[i][0]) << ',' << fmt(coords[i][1]) << '\n';
    return paths;
}

void write_model_projection(const EmbeddingModel& model, std::ostream& out) {
    out << "asn,hierarchy,pc1,pc2\n";
    const auto& asns = model.asns();
    std::vector<std::vector<double>> rows;
    rows.reserve(asns.size());
    for (Asn as : asns) rows.push_back(model.rejection(as));
    auto coords = pca2(rows);
    for (size_t i = 0; i < asns.size(); ++i)
        out << asns[i] << ',' << fmt(model.hierarchy_projection(asns[i])) << ','
            << fmt(coords[i][0]) << ',' << fmt(coords[i][1]) << '\n';
}

void write_pair_set_values(const EmbeddingModel& model, const AsGraph& graph,
                           const std::vector<RelationshipRecord>& records, size_t max_per_set,
                           uint64_t seed, std::ostream& out) {
    PairSets sets = build_pair_sets(graph, records, max_per_set, seed);
    auto diffs = pair_set_differences(model, sets);
    out << "set,value\n";
    for (const auto& [name, values] : diffs)
        for (double v : values) out << name << ',' << fmt(v) << '\n';
}

} // namespace routerole
