#pragma once

#include <stdexcept>
#include <string>

namespace qif {

/// Base class for all analyzer errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mismatched index sets, invalid distributions, malformed inputs.
struct DomainError : Error {
    using Error::Error;
};

/// A configured resource cap was exceeded; carries the cap's name so the
/// front end can report which limit to raise.
struct CapError : Error {
    std::string cap;
    CapError(std::string cap_name, const std::string& msg)
        : Error(msg), cap(std::move(cap_name)) {}
};

/// Leakage is undefined (zero prior vulnerability).
struct UndefinedLeakage : Error {
    using Error::Error;
};

/// Source-level error from the program DSL, with position.
struct ParseError : Error {
    int line;
    int col;
    ParseError(int l, int c, const std::string& msg)
        : Error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}
};

} // namespace qif
