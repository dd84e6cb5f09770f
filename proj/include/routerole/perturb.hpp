#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "routerole/relationships.hpp"

namespace routerole {

// Noise models for robustness experiments on relationship data.
//   random_flip     flip the label of floor(ratio% * N) randomly chosen records
//   random_delete   delete floor(ratio% * N) randomly chosen records
//   weighted_flip   flip the records whose links carry the fewest routes
//   weighted_delete delete the records whose links carry the fewest routes
enum class NoiseKind {
    random_flip,
    random_delete,
    weighted_flip,
    weighted_delete,
};

NoiseKind noise_kind_from_string(const std::string& s);

// Routes observed per AS-to-AS link, keyed on the unordered ASN pair.
using RouteUsage = std::map<std::pair<Asn, Asn>, uint64_t>;

RouteUsage load_route_usage(const std::string& path);
void save_route_usage(const std::string& path, const RouteUsage& usage);

// Applies a noise model to relationship records. ratio_percent is the r in
// "r% of records"; the affected count is floor(ratio_percent/100 * N).
// Weighted variants rank records by ascending route count (missing links
// count zero) breaking ties by ascending (u,v); they require usage and throw
// MissingRouteUsage otherwise. Random variants select by seeded shuffle.
// Flipping exchanges P2P and P2C labels; a C2P record flips to P2P.
std::vector<RelationshipRecord> perturb(const std::vector<RelationshipRecord>& records,
                                        NoiseKind kind, double ratio_percent,
                                        const RouteUsage* usage, uint64_t seed);

} // namespace routerole
