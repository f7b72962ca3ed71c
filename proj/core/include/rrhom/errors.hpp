#pragma once

#include <stdexcept>
#include <string>

namespace rrhom {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input text or JSON. Carries a 1-based line number when known.
struct ParseError : Error {
    int line = 0;
    ParseError(const std::string& msg, int line_no)
        : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

/// Structurally invalid data: duplicate ids, dangling endpoints, sinks, maps
/// that fail the homomorphism equations, and similar.
struct ValidationError : Error {
    using Error::Error;
};

/// An operation was called outside its contract (wrong graph class, mismatched
/// codomains, missing strong connectedness, ...).
struct PreconditionError : Error {
    using Error::Error;
};

/// A configured search or size budget was exhausted. The result is
/// inconclusive, never a negative claim.
struct BudgetError : Error {
    using Error::Error;
};

/// A verified-by-construction property failed to verify. Indicates a bug in
/// the library, not in the caller's input.
struct InternalCheckError : Error {
    using Error::Error;
};

}  // namespace rrhom
