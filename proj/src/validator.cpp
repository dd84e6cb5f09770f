#include "routerole/validator.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "routerole/asn.hpp"

namespace routerole {

const char* to_string(RpkiState s) {
    switch (s) {
        case RpkiState::not_found: return "NotFound";
        case RpkiState::valid: return "Valid";
        case RpkiState::invalid_length: return "InvalidLength";
        case RpkiState::invalid_asn: return "InvalidAsn";
    }
    return "?";
}

const char* to_string(ValleyVerdict v) {
    switch (v) {
        case ValleyVerdict::ok: return "ok";
        case ValleyVerdict::violation: return "violation";
        case ValleyVerdict::not_evaluable: return "not_evaluable";
    }
    return "?";
}

void RoaTable::add(const RoaEntry& entry) {
    if (std::vector<RoaEntry>* existing = trie_.find_exact(entry.prefix)) {
        existing->push_back(entry);
    } else {
        trie_.insert(entry.prefix, {entry});
    }
    ++size_;
}

RpkiState RoaTable::validate(const IpPrefix& prefix, Asn origin) const {
    bool covered = false;
    bool origin_match = false;
    bool valid = false;
    trie_.for_each_covering(prefix, [&](const IpPrefix&, const std::vector<RoaEntry>& entries) {
        for (const RoaEntry& roa : entries) {
            covered = true;
            if (roa.asn == origin) {
                origin_match = true;
                if (prefix.length <= roa.max_length) valid = true;
            }
        }
    });
    if (!covered) return RpkiState::not_found;
    if (valid) return RpkiState::valid;
    return origin_match ? RpkiState::invalid_length : RpkiState::invalid_asn;
}

RoaTable RoaTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ROA file " + path);
    RoaTable table;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("prefix", 0) == 0) continue; // header

        std::istringstream ls(line);
        std::string prefix_s, maxlen_s, asn_s;
        if (!std::getline(ls, prefix_s, ',') || !std::getline(ls, maxlen_s, ',') ||
            !std::getline(ls, asn_s))
            throw MalformedLine(path, line_no, "expected prefix,max_length,asn");

        RoaEntry entry;
        try {
            entry.prefix = IpPrefix::parse(prefix_s);
        } catch (const BadPrefix& e) {
            throw MalformedLine(path, line_no, e.what());
        }
        unsigned maxlen = 0;
        auto [p1, e1] = std::from_chars(maxlen_s.data(), maxlen_s.data() + maxlen_s.size(), maxlen);
        if (e1 != std::errc() || p1 != maxlen_s.data() + maxlen_s.size() ||
            maxlen > entry.prefix.max_bits())
            throw MalformedLine(path, line_no, "bad max_length \"" + maxlen_s + "\"");
        entry.max_length = static_cast<uint8_t>(maxlen);
        if (asn_s.rfind("AS", 0) == 0) asn_s.erase(0, 2);
        uint32_t asn = 0;
        auto [p2, e2] = std::from_chars(asn_s.data(), asn_s.data() + asn_s.size(), asn);
        if (e2 != std::errc() || p2 != asn_s.data() + asn_s.size())
            throw MalformedLine(path, line_no, "bad ASN \"" + asn_s + "\"");
        entry.asn = asn;
        table.add(entry);
    }
    return table;
}

void OrgTable::set(Asn asn, std::string org) { map_[asn] = std::move(org); }

std::optional<std::string> OrgTable::org_of(Asn asn) const {
    auto it = map_.find(asn);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

bool OrgTable::same_org(Asn a, Asn b) const {
    auto oa = org_of(a);
    auto ob = org_of(b);
    return oa && ob && *oa == *ob;
}

OrgTable OrgTable::load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open organization file " + path);
    OrgTable table;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw MalformedLine(path, line_no, "expected asn<TAB>org_id");
        std::string asn_s = line.substr(0, tab);
        size_t tab2 = line.find('\t', tab + 1);
        std::string org = line.substr(tab + 1, tab2 == std::string::npos ? std::string::npos
                                                                         : tab2 - tab - 1);
        uint32_t asn = 0;
        auto [p, e] = std::from_chars(asn_s.data(), asn_s.data() + asn_s.size(), asn);
        if (e != std::errc() || p != asn_s.data() + asn_s.size() || org.empty())
            throw MalformedLine(path, line_no, "expected asn<TAB>org_id");
        table.set(asn, org);
    }
    return table;
}

ValleyVerdict valley_free(const AsPath& path_vantage_first, const AsGraph& graph) {
    if (path_vantage_first.empty()) throw EmptyPath("cannot evaluate an empty path");

    // collapse consecutive duplicates; prepending is not a relationship hop
    AsPath path;
    for (Asn asn : path_vantage_first)
        if (path.empty() || path.back() != asn) path.push_back(asn);
    if (path.size() == 1) return ValleyVerdict::ok;

    // classify hops walking origin -> vantage
    enum Hop { up, down, peer, unknown };
    std::vector<Hop> hops;
    for (size_t i = path.size() - 1; i > 0; --i) {
        Asn from = path[i];     // closer to the origin
        Asn to = path[i - 1];   // learned the route from `from`
        bool fwd = graph.has_edge(from, to); // from provider-or-peer of to
        bool rev = graph.has_edge(to, from);
        if (fwd && rev) hops.push_back(peer);
        else if (fwd) hops.push_back(down); // from is provider: route flows down
        else if (rev) hops.push_back(up);   // to is provider: route climbs up
        else hops.push_back(unknown);
    }
    for (Hop h : hops)
        if (h == unknown) return ValleyVerdict::not_evaluable;

    int phase = 0; // 0 = ascending, 1 = peered, 2 = descending
    for (Hop h : hops) {
        switch (h) {
            case up:
                if (phase != 0) return ValleyVerdict::violation;
                break;
            case peer:
                if (phase != 0) return ValleyVerdict::violation;
                phase = 1;
                break;
            case down:
                phase = 2;
                break;
            case unknown:
                return ValleyVerdict::not_evaluable;
        }
    }
    return ValleyVerdict::ok;
}

namespace {

Asn origin_of(const AsPath& path_vantage_first) { return path_vantage_first.back(); }

bool has_reserved(const AsPath& path) {
    return std::any_of(path.begin(), path.end(), is_reserved_asn);
}

bool has_unknown_adjacency(const AsPath& path, const AsGraph& graph) {
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        if (path[i] == path[i + 1]) continue;
        if (!graph.adjacent(path[i], path[i + 1])) return true;
    }
    return false;
}

bool has_duplicate_asn(const AsPath& path) {
    std::set<Asn> seen;
    for (Asn asn : path)
        if (!seen.insert(asn).second) return true;
    return false;
}

} // namespace

PatternMatch match_patterns(const RouteChange& change, const RoaTable& roas, const OrgTable& orgs,
                            const AsGraph& graph) {
    PatternMatch match;
    if (change.new_path.empty() || change.old_path.empty())
        throw EmptyPath("route change carries an empty path");

    Asn new_origin = origin_of(change.new_path);
    Asn old_origin = origin_of(change.old_path);
    match.new_state = roas.validate(change.announced, new_origin);
    match.old_state = roas.validate(change.conflicting, old_origin);
    match.new_valley = valley_free(change.new_path, graph);
    match.old_valley = valley_free(change.old_path, graph);

    bool distinct_origins = new_origin != old_origin;
    bool same = orgs.same_org(new_origin, old_origin);

    // different organizations, one side authorized and the other denied by ROAs
    match.origin_hijack =
        distinct_origins && !same &&
        ((match.new_state == RpkiState::invalid_asn && match.old_state == RpkiState::valid) ||
         (match.new_state == RpkiState::valid && match.old_state == RpkiState::invalid_asn));

    match.route_leak = match.new_valley == ValleyVerdict::violation ||
                       match.old_valley == ValleyVerdict::violation;

    match.path_manipulation = has_reserved(change.new_path) || has_reserved(change.old_path) ||
                              has_unknown_adjacency(change.new_path, graph) ||
                              has_unknown_adjacency(change.old_path, graph);

    auto invalid = [](RpkiState s) {
        return s == RpkiState::invalid_length || s == RpkiState::invalid_asn;
    };
    match.roa_misconfig = distinct_origins && same &&
                          ((match.new_state == RpkiState::valid && invalid(match.old_state)) ||
                           (invalid(match.new_state) && match.old_state == RpkiState::valid));
    return match;
}

AlarmValidation classify_alarm(const Alarm& alarm, const RoaTable& roas, const OrgTable& orgs,
                               const AsGraph& graph) {
    AlarmValidation out;
    for (const PrefixEvent& event : alarm.events) {
        for (const ScoredChange& sc : event.changes) {
            PatternMatch match = match_patterns(sc.change, roas, orgs, graph);
            ++out.total_changes;
            if (match.origin_hijack) ++out.counts[0];
            if (match.route_leak) ++out.counts[1];
            if (match.path_manipulation) ++out.counts[2];
            if (match.roa_misconfig) ++out.counts[3];
        }
    }
    // strict majority of member changes, judged on exact counts
    for (size_t i = 0; i < out.counts.size(); ++i) {
        if (out.total_changes && 2 * out.counts[i] > out.total_changes) out.high_confidence = true;
        if (out.counts[i] && (out.dominant < 0 || out.counts[i] > out.counts[out.dominant]))
            out.dominant = static_cast<int>(i);
    }
    return out;
}

bool label_legitimate(const RouteChange& change, const OrgTable& orgs) {
    if (change.new_path.empty() || change.old_path.empty()) return false;
    Asn new_origin = origin_of(change.new_path);
    Asn old_origin = origin_of(change.old_path);
    if (new_origin == old_origin) return false;
    if (!orgs.same_org(new_origin, old_origin)) return false;
    return !has_duplicate_asn(change.new_path) && !has_duplicate_asn(change.old_path);
}

} // namespace routerole
