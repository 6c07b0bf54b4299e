#pragma once

#include <stdexcept>
#include <string>

namespace rulkit {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A statistic was requested before enough samples were seen.
struct InsufficientData : Error {
    using Error::Error;
};

/// A series is too short for the requested lag structure.
struct HistoryTooShort : Error {
    using Error::Error;
};

/// A relative metric was asked for against a zero reference value.
struct ZeroReference : Error {
    using Error::Error;
};

/// Input data violates the expected schema (ordering, ranges, duplicates).
struct SchemaError : Error {
    using Error::Error;
};

/// A row of an input file could not be parsed; carries the 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& what, int line_no)
        : Error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    int line;
};

} // namespace rulkit
