#include "routerole/replay.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace routerole {

using nlohmann::json;

namespace {

RawPath parse_path_field(const json& j) {
    RawPath path;
    for (const auto& element : j) {
        if (element.is_number_unsigned()) {
            path.asns.push_back(element.get<Asn>());
        } else if (element.is_array()) {
            // AS_SET segment: keep members (in order) but flag the path
            path.has_as_set = true;
            for (const auto& member : element)
                if (member.is_number_unsigned()) path.asns.push_back(member.get<Asn>());
        } else {
            throw MalformedAnnouncement("path elements must be ASNs or AS_SET arrays");
        }
    }
    return path;
}

} // namespace

Announcement parse_announcement_line(const std::string& line, uint64_t index) {
    json j = json::parse(line); // throws json::parse_error
    Announcement ann;
    ann.index = index;
    ann.t = j.at("t").get<int64_t>();
    ann.t_us = j.value("t_us", 0u);
    if (ann.t_us >= 1000000u) throw MalformedAnnouncement("t_us out of range");
    ann.vantage = j.at("vantage").get<Asn>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "A")
        ann.kind = AnnKind::announce;
    else if (kind == "W")
        ann.kind = AnnKind::withdraw;
    else
        throw MalformedAnnouncement("kind must be \"A\" or \"W\"");
    ann.prefix = IpPrefix::parse(j.at("prefix").get<std::string>());
    if (ann.kind == AnnKind::announce) {
        if (!j.contains("path")) throw MalformedAnnouncement("announcement without path");
        ann.path = parse_path_field(j.at("path"));
    }
    return ann;
}

ReplayReader::ReplayReader(std::istream& in, int64_t skew_s) : in_(in), skew_s_(skew_s) {}

std::optional<Announcement> ReplayReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++stats_.lines;
        if (line.empty()) continue;
        Announcement ann;
        try {
            ann = parse_announcement_line(line, next_index_);
        } catch (const std::exception& e) {
            ++stats_.parse_errors;
            if (stats_.first_errors.size() < 10)
                stats_.first_errors.push_back("line " + std::to_string(stats_.lines) + ": " +
                                              e.what());
            continue;
        }
        ++next_index_;
        int64_t us = to_usec(ann.t, ann.t_us);
        if (us + skew_s_ * 1000000 < high_water_us_) {
            ++stats_.skew_rejected;
            continue;
        }
        high_water_us_ = std::max(high_water_us_, us);
        ++stats_.records;
        return ann;
    }
    return std::nullopt;
}

void write_announcement(std::ostream& out, const Announcement& ann) {
    json j;
    j["t"] = ann.t;
    if (ann.t_us) j["t_us"] = ann.t_us;
    j["vantage"] = ann.vantage;
    j["kind"] = ann.kind == AnnKind::announce ? "A" : "W";
    j["prefix"] = ann.prefix.to_string();
    if (ann.kind == AnnKind::announce) j["path"] = ann.path.asns;
    out << j.dump() << '\n';
}

uint64_t load_rib_seed(const std::string& path, RoutingMonitor& monitor, ReplayStats* stats) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open RIB seed file " + path);
    ReplayStats local;
    ReplayStats& st = stats ? *stats : local;
    std::string line;
    uint64_t loaded = 0;
    while (std::getline(in, line)) {
        ++st.lines;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            Asn vantage = j.at("vantage").get<Asn>();
            IpPrefix prefix = IpPrefix::parse(j.at("prefix").get<std::string>());
            RawPath path_field = parse_path_field(j.at("path"));
            monitor.seed_rib_entry(vantage, prefix, path_field);
            ++loaded;
            ++st.records;
        } catch (const std::exception& e) {
            ++st.parse_errors;
            if (st.first_errors.size() < 10)
                st.first_errors.push_back("line " + std::to_string(st.lines) + ": " + e.what());
        }
    }
    return loaded;
}

void write_rib_entry(std::ostream& out, Asn vantage, const IpPrefix& prefix, const AsPath& path) {
    json j;
    j["vantage"] = vantage;
    j["prefix"] = prefix.to_string();
    j["path"] = path;
    out << j.dump() << '\n';
}

} // namespace routerole
