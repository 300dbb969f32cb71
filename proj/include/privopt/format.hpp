#pragma once

#include <charconv>
#include <stdexcept>
#include <string>

namespace privopt {

// Shortest round-trip decimal form via to_chars: locale-free, deterministic,
// and re-parsing gives back the exact double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Fixed number of significant digits (general format).
inline std::string format_double(double v, int significant_digits) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant_digits);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument("parse_double: invalid number '" + text + "'");
    }
    return v;
}

}  // namespace privopt
