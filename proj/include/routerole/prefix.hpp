#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "routerole/errors.hpp"

namespace routerole {

struct BadPrefix : Error {
    using Error::Error;
};

// IPv4 or IPv6 prefix in one representation: 16 address bytes (v4 occupies
// the first four) plus a length. Host bits beyond the length are zeroed on
// parse so equal prefixes compare equal.
struct IpPrefix {
    std::array<uint8_t, 16> addr{};
    uint8_t length = 0;
    bool v6 = false;

    static IpPrefix parse(const std::string& text); // throws BadPrefix
    std::string to_string() const;

    uint8_t max_bits() const { return v6 ? 128 : 32; }
    bool is_default_route() const { return length == 0; }

    // i-th bit of the address, 0 = most significant.
    int bit(uint8_t i) const { return (addr[i / 8] >> (7 - i % 8)) & 1; }

    // True when this prefix contains `other` (same family, not longer, and
    // the first `length` bits agree). A prefix covers itself.
    bool covers(const IpPrefix& other) const;

    auto operator<=>(const IpPrefix&) const = default;
};

} // namespace routerole
