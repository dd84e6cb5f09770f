#include "routerole/prefix.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <cstring>

namespace routerole {

IpPrefix IpPrefix::parse(const std::string& text) {
    size_t slash = text.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= text.size())
        throw BadPrefix("prefix must look like addr/len: \"" + text + "\"");

    std::string addr_part = text.substr(0, slash);
    unsigned length = 0;
    const char* len_begin = text.data() + slash + 1;
    auto [ptr, ec] = std::from_chars(len_begin, text.data() + text.size(), length);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw BadPrefix("bad prefix length in \"" + text + "\"");

    IpPrefix out;
    unsigned char buf[16];
    if (addr_part.find(':') != std::string::npos) {
        if (inet_pton(AF_INET6, addr_part.c_str(), buf) != 1)
            throw BadPrefix("bad IPv6 address in \"" + text + "\"");
        out.v6 = true;
        std::memcpy(out.addr.data(), buf, 16);
    } else {
        if (inet_pton(AF_INET, addr_part.c_str(), buf) != 1)
            throw BadPrefix("bad IPv4 address in \"" + text + "\"");
        out.v6 = false;
        std::memcpy(out.addr.data(), buf, 4);
    }
    if (length > out.max_bits())
        throw BadPrefix("prefix length out of range in \"" + text + "\"");
    out.length = static_cast<uint8_t>(length);

    // zero host bits
    for (unsigned i = length; i < out.max_bits(); ++i)
        out.addr[i / 8] &= static_cast<uint8_t>(~(1u << (7 - i % 8)));
    return out;
}

std::string IpPrefix::to_string() const {
    char buf[INET6_ADDRSTRLEN];
    if (v6) {
        inet_ntop(AF_INET6, addr.data(), buf, sizeof buf);
    } else {
        inet_ntop(AF_INET, addr.data(), buf, sizeof buf);
    }
    return std::string(buf) + "/" + std::to_string(length);
}

bool IpPrefix::covers(const IpPrefix& other) const {
    if (v6 != other.v6 || length > other.length) return false;
    unsigned full_bytes = length / 8;
    if (std::memcmp(addr.data(), other.addr.data(), full_bytes) != 0) return false;
    unsigned rem = length % 8;
    if (rem == 0) return true;
    uint8_t mask = static_cast<uint8_t>(0xff << (8 - rem));
    return (addr[full_bytes] & mask) == (other.addr[full_bytes] & mask);
}

} // namespace routerole
