#include "routerole/perturb.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "routerole/errors.hpp"
#include "routerole/rng.hpp"

namespace routerole {

NoiseKind noise_kind_from_string(const std::string& s) {
    if (s == "R1" || s == "random_flip") return NoiseKind::random_flip;
    if (s == "R2" || s == "random_delete") return NoiseKind::random_delete;
    if (s == "W1" || s == "weighted_flip") return NoiseKind::weighted_flip;
    if (s == "W2" || s == "weighted_delete") return NoiseKind::weighted_delete;
    throw ConfigError("unknown noise kind \"" + s + "\" (use R1, R2, W1 or W2)");
}

RouteUsage load_route_usage(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open route usage file " + path);
    RouteUsage usage;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        Asn u = 0, v = 0;
        uint64_t count = 0;
        std::istringstream ls(line);
        if (!(ls >> u >> v >> count))
            throw MalformedLine(path, line_no, "expected u v count");
        auto key = std::minmax(u, v);
        usage[{key.first, key.second}] += count;
    }
    return usage;
}

void save_route_usage(const std::string& path, const RouteUsage& usage) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write route usage file " + path);
    for (const auto& [link, count] : usage)
        out << link.first << '\t' << link.second << '\t' << count << '\n';
}

namespace {

Relationship flipped(Relationship rel) {
    switch (rel) {
        case Relationship::p2p: return Relationship::p2c;
        case Relationship::p2c: return Relationship::p2p;
        case Relationship::c2p: return Relationship::p2p;
    }
    return Relationship::p2p;
}

uint64_t usage_of(const RouteUsage& usage, Asn u, Asn v) {
    auto key = std::minmax(u, v);
    auto it = usage.find({key.first, key.second});
    return it == usage.end() ? 0 : it->second;
}

} // namespace

std::vector<RelationshipRecord> perturb(const std::vector<RelationshipRecord>& records,
                                        NoiseKind kind, double ratio_percent,
                                        const RouteUsage* usage, uint64_t seed) {
    if (ratio_percent < 0.0 || ratio_percent > 100.0)
        throw ConfigError("noise ratio must be within [0, 100]");
    size_t n = records.size();
    size_t affected = static_cast<size_t>(std::floor(ratio_percent / 100.0 * static_cast<double>(n)));

    std::vector<size_t> chosen;
    if (kind == NoiseKind::random_flip || kind == NoiseKind::random_delete) {
        Rng rng(seed);
        chosen = rng.sample_indices(n, affected);
    } else {
        if (!usage)
            throw MissingRouteUsage("weighted noise models need per-link route counts");
        std::vector<size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            uint64_t ua = usage_of(*usage, records[a].u, records[a].v);
            uint64_t ub = usage_of(*usage, records[b].u, records[b].v);
            if (ua != ub) return ua < ub;
            if (records[a].u != records[b].u) return records[a].u < records[b].u;
            return records[a].v < records[b].v;
        });
        order.resize(affected);
        chosen = std::move(order);
    }

    std::vector<bool> selected(n, false);
    for (size_t i : chosen) selected[i] = true;

    std::vector<RelationshipRecord> out;
    out.reserve(n);
    bool flip = kind == NoiseKind::random_flip || kind == NoiseKind::weighted_flip;
    for (size_t i = 0; i < n; ++i) {
        if (!selected[i]) {
            out.push_back(records[i]);
        } else if (flip) {
            RelationshipRecord r = records[i];
            r.rel = flipped(r.rel);
            out.push_back(r);
        }
        // deletions just skip the record
    }
    return out;
}

} // namespace routerole
