#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "routerole/asn.hpp"

namespace routerole {

enum class Relationship : uint8_t {
    p2p, // u and v are peers
    p2c, // u is a provider of v
    c2p, // u is a customer of v
};

const char* to_string(Relationship r);

struct RelationshipRecord {
    Asn u = 0;
    Asn v = 0;
    Relationship rel = Relationship::p2p;

    bool operator==(const RelationshipRecord&) const = default;
};

enum class RelFileFormat {
    auto_detect,
    caida, // "u|v|code" with code -1 (u provider of v) or 0 (peers), '#' comments
    tsv,   // "u<TAB>v<TAB>{p2p|p2c|c2p}"
};

struct ParseStats {
    size_t lines = 0;
    size_t records = 0;
    size_t exact_duplicates = 0;       // same (u,v) pair, same label, dropped
    size_t conflicting_duplicates = 0; // same (u,v) pair, different label: first kept
    std::vector<std::string> warnings; // one message per duplicate, capped
};

// Parses relationship records, deduplicating (u,v) pairs (first occurrence
// wins). Unknown relationship codes are rejected as malformed lines.
// Throws MalformedLine, EmptyInput.
std::vector<RelationshipRecord> parse_relationships(std::istream& in,
                                                    RelFileFormat format = RelFileFormat::auto_detect,
                                                    ParseStats* stats = nullptr,
                                                    const std::string& filename = "<input>");

std::vector<RelationshipRecord> load_relationships(const std::string& path,
                                                   RelFileFormat format = RelFileFormat::auto_detect,
                                                   ParseStats* stats = nullptr);

void write_relationships(std::ostream& out, const std::vector<RelationshipRecord>& records,
                         RelFileFormat format);
void save_relationships(const std::string& path, const std::vector<RelationshipRecord>& records,
                        RelFileFormat format);

} // namespace routerole
