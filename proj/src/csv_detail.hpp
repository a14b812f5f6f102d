#pragma once

#include <charconv>
#include <string>

namespace grnf::detail {

// Shortest decimal form that parses back to the identical double; CSV output
// built from this is byte-stable across runs and thread counts.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace grnf::detail
