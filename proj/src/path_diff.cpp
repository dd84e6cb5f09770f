#include "routerole/path_diff.hpp"

namespace routerole {

AsPath preprocess_path(const RawPath& raw, bool collapse_prepend) {
    if (raw.has_as_set)
        throw ContainsAsSet("path contains an AS_SET segment");
    return preprocess_path(raw.asns, collapse_prepend);
}

AsPath preprocess_path(const std::vector<Asn>& asns, bool collapse_prepend) {
    if (asns.empty()) throw EmptyPath("empty AS path");
    AsPath out;
    out.reserve(asns.size());
    for (Asn asn : asns) {
        if (collapse_prepend && !out.empty() && out.back() == asn) continue;
        out.push_back(asn);
    }
    return out;
}

} // namespace routerole
