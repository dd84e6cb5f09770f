#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "routerole/monitor.hpp"

namespace routerole {

// Replay streams are JSON lines:
//   {"t":1700000000,"t_us":12,"vantage":65010,"kind":"A",
//    "prefix":"10.5.0.0/16","path":[65010,64601,64512]}
//   {"t":1700000001,"vantage":65010,"kind":"W","prefix":"10.5.0.0/16"}
// t_us is optional. Withdrawals omit the path. An AS_SET appears as a nested
// array inside "path". RIB seed files use the same shape minus t/kind:
//   {"vantage":65010,"prefix":"10.5.0.0/16","path":[65010,64601,64512]}

struct ReplayStats {
    uint64_t lines = 0;
    uint64_t records = 0;
    uint64_t parse_errors = 0;
    uint64_t skew_rejected = 0;
    std::vector<std::string> first_errors; // capped at a handful
};

// Streaming reader with a monotonic-clock guard: a record may step back at
// most `skew_s` seconds behind the latest timestamp seen, otherwise it is
// rejected and counted. Parse failures are likewise counted and skipped.
class ReplayReader {
public:
    ReplayReader(std::istream& in, int64_t skew_s = 0);

    // Next valid announcement, or nullopt at end of stream.
    std::optional<Announcement> next();

    const ReplayStats& stats() const { return stats_; }

private:
    std::istream& in_;
    int64_t skew_s_;
    int64_t high_water_us_ = INT64_MIN;
    uint64_t next_index_ = 0;
    ReplayStats stats_;
};

// Parses one replay line; used by the reader and by tests.
Announcement parse_announcement_line(const std::string& line, uint64_t index);

void write_announcement(std::ostream& out, const Announcement& ann);

// Loads a RIB seed file into the monitor; returns entries loaded.
uint64_t load_rib_seed(const std::string& path, RoutingMonitor& monitor, ReplayStats* stats = nullptr);
void write_rib_entry(std::ostream& out, Asn vantage, const IpPrefix& prefix, const AsPath& path);

} // namespace routerole
