#pragma once

// Locale-independent, deterministic number formatting built on std::to_chars.

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <system_error>

namespace wssus {

/// Shortest representation that round-trips to the same double.
inline std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw std::runtime_error("fmt_double: to_chars failed");
    return std::string(buf, ptr);
}

/// Fixed-point with the given number of decimals (SVG coordinates).
inline std::string fmt_fixed(double x, int precision) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, precision);
    if (ec != std::errc()) throw std::runtime_error("fmt_fixed: to_chars failed");
    return std::string(buf, ptr);
}

/// General format with the given significant digits (labels).
inline std::string fmt_general(double x, int precision) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, precision);
    if (ec != std::errc()) throw std::runtime_error("fmt_general: to_chars failed");
    return std::string(buf, ptr);
}

inline double parse_double(const std::string& s) {
    if (s == "nan" || s == "-nan") return std::nan("");
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("parse_double: bad number '" + s + "'");
    return v;
}

}  // namespace wssus
