/**
 * @file format.hpp
 * @brief Locale-independent number formatting.
 */
#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace stagwave::fmt {

/// Shortest-round-trip is not used on purpose: every value gets 17 significant digits.
inline std::string sig17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

/// Fixed notation with the given number of decimals.
inline std::string fixed(double v, int decimals) {
    if (!std::isfinite(v)) return sig17(v);
    char buf[128];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    if (r.ec != std::errc()) return sig17(v);
    return std::string(buf, r.ptr);
}

/// Short scientific notation for human-readable reports.
inline std::string sci(double v, int digits = 3) {
    if (!std::isfinite(v)) return sig17(v);
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, digits);
    return std::string(buf, r.ptr);
}

}  // namespace stagwave::fmt
