#pragma once

#include <cstdint>

namespace routerole {

using Asn = uint32_t;

// Reserved / private-use ASNs should never appear in a public AS path; when
// one does, the announcement itself is evidence of manipulation.
//   64512..65534        private use (RFC 6996)
//   4200000000..4294967294  private use, 32-bit range
//   23456               AS_TRANS placeholder
inline bool is_reserved_asn(Asn asn) {
    if (asn >= 64512u && asn <= 65534u) return true;
    if (asn >= 4200000000u && asn <= 4294967294u) return true;
    return asn == 23456u;
}

} // namespace routerole
