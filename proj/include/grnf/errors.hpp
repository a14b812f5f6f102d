#pragma once

#include <stdexcept>
#include <string>

namespace grnf {

// Base for all library errors; the CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or out-of-contract input data (bad graph JSON, bad ids,
// self-loops, attribute bound violations, inconsistent corpus shapes, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Requests beyond the hard size caps (partition enumeration, Bell arguments,
// tensor materialization).
class DimensionLimitError : public Error {
public:
    explicit DimensionLimitError(const std::string& what) : Error(what) {}
};

// Importance-sampling coverage violations (proposal assigns zero mass where
// the target does not).
class CoverageError : public Error {
public:
    explicit CoverageError(const std::string& what) : Error(what) {}
};

}  // namespace grnf
