#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace routerole {

// Base class for all errors raised by the library. Each error class maps to a
// distinct process exit code, see cli_exit_code().
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// A line in an input file that does not match the documented format.
struct MalformedLine : Error {
    MalformedLine(const std::string& file, size_t line_no, const std::string& detail)
        : Error(file + ":" + std::to_string(line_no) + ": " + detail),
          line(line_no) {}
    size_t line;
};

struct EmptyInput : Error {
    using Error::Error;
};

struct MissingRouteUsage : Error {
    using Error::Error;
};

struct InvalidHyperparams : Error {
    using Error::Error;
};

struct UnknownAsn : Error {
    explicit UnknownAsn(uint32_t asn)
        : Error("ASN " + std::to_string(asn) + " is not present in the model") {}
};

struct EmptyPath : Error {
    using Error::Error;
};

// Raised when an announcement carries an AS_SET segment; scoring such paths is
// not meaningful, callers are expected to count and skip them.
struct ContainsAsSet : Error {
    using Error::Error;
};

struct CorruptModel : Error {
    using Error::Error;
};

enum class ExitCode : int {
    ok = 0,
    usage = 1,       // bad flags / bad config
    missing_input = 2,
    parse_error = 3, // malformed input data
    contract = 4,    // empty input, invalid hyperparameters, unknown ASN
    io = 5,
    internal = 9,
};

} // namespace routerole
