#include "routerole/relationships.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "routerole/errors.hpp"

namespace routerole {

const char* to_string(Relationship r) {
    switch (r) {
        case Relationship::p2p: return "p2p";
        case Relationship::p2c: return "p2c";
        case Relationship::c2p: return "c2p";
    }
    return "?";
}

namespace {

void strip_cr(std::string& s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.pop_back();
}

bool parse_asn(const std::string& tok, Asn& out) {
    if (tok.empty()) return false;
    uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) return false;
    out = value;
    return true;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

RelationshipRecord parse_caida_line(const std::string& file, size_t line_no,
                                    const std::string& line) {
    auto fields = split(line, '|');
    if (fields.size() != 3)
        throw MalformedLine(file, line_no, "expected u|v|code, got \"" + line + "\"");
    RelationshipRecord rec;
    if (!parse_asn(fields[0], rec.u) || !parse_asn(fields[1], rec.v))
        throw MalformedLine(file, line_no, "bad ASN in \"" + line + "\"");
    if (fields[2] == "-1") {
        rec.rel = Relationship::p2c;
    } else if (fields[2] == "0") {
        rec.rel = Relationship::p2p;
    } else {
        // Anything else (siblings, hybrid codes) is out of scope here.
        throw MalformedLine(file, line_no, "unsupported relationship code \"" + fields[2] + "\"");
    }
    return rec;
}

RelationshipRecord parse_tsv_line(const std::string& file, size_t line_no,
                                  const std::string& line) {
    auto fields = split(line, '\t');
    if (fields.size() != 3)
        throw MalformedLine(file, line_no, "expected u<TAB>v<TAB>rel, got \"" + line + "\"");
    RelationshipRecord rec;
    if (!parse_asn(fields[0], rec.u) || !parse_asn(fields[1], rec.v))
        throw MalformedLine(file, line_no, "bad ASN in \"" + line + "\"");
    if (fields[2] == "p2p") rec.rel = Relationship::p2p;
    else if (fields[2] == "p2c") rec.rel = Relationship::p2c;
    else if (fields[2] == "c2p") rec.rel = Relationship::c2p;
    else
        throw MalformedLine(file, line_no, "unsupported relationship \"" + fields[2] + "\"");
    return rec;
}

} // namespace

std::vector<RelationshipRecord> parse_relationships(std::istream& in, RelFileFormat format,
                                                    ParseStats* stats,
                                                    const std::string& filename) {
    std::vector<RelationshipRecord> records;
    std::map<std::pair<Asn, Asn>, Relationship> seen;
    ParseStats local;
    ParseStats& st = stats ? *stats : local;

    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ++st.lines;
        strip_cr(line);
        if (line.empty() || line[0] == '#') continue;

        if (format == RelFileFormat::auto_detect)
            format = line.find('|') != std::string::npos ? RelFileFormat::caida
                                                         : RelFileFormat::tsv;

        RelationshipRecord rec = format == RelFileFormat::caida
                                     ? parse_caida_line(filename, line_no, line)
                                     : parse_tsv_line(filename, line_no, line);

        auto key = std::make_pair(rec.u, rec.v);
        auto it = seen.find(key);
        if (it != seen.end()) {
            if (it->second == rec.rel) {
                ++st.exact_duplicates;
            } else {
                ++st.conflicting_duplicates;
                if (st.warnings.size() < 50)
                    st.warnings.push_back(filename + ":" + std::to_string(line_no) +
                                          ": pair " + std::to_string(rec.u) + "," +
                                          std::to_string(rec.v) +
                                          " repeated with a different label; keeping the first");
            }
            continue;
        }
        seen.emplace(key, rec.rel);
        records.push_back(rec);
        ++st.records;
    }

    if (records.empty())
        throw EmptyInput("no relationship records in " + filename);
    return records;
}

std::vector<RelationshipRecord> load_relationships(const std::string& path, RelFileFormat format,
                                                   ParseStats* stats) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open relationship file " + path);
    return parse_relationships(in, format, stats, path);
}

void write_relationships(std::ostream& out, const std::vector<RelationshipRecord>& records,
                         RelFileFormat format) {
    if (format == RelFileFormat::caida) {
        for (const auto& r : records) {
            // CAIDA serial-1 has no c2p code; emit the provider first instead.
            if (r.rel == Relationship::c2p)
                out << r.v << '|' << r.u << "|-1\n";
            else
                out << r.u << '|' << r.v << (r.rel == Relationship::p2c ? "|-1\n" : "|0\n");
        }
    } else {
        for (const auto& r : records)
            out << r.u << '\t' << r.v << '\t' << to_string(r.rel) << '\n';
    }
}

void save_relationships(const std::string& path, const std::vector<RelationshipRecord>& records,
                        RelFileFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write relationship file " + path);
    if (format == RelFileFormat::auto_detect) format = RelFileFormat::caida;
    write_relationships(out, records, format);
    if (!out) throw IoError("short write to " + path);
}

} // namespace routerole
