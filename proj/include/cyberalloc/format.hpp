#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace cyberalloc {

/// Locale-independent number formatting. decimals >= 0 gives fixed
/// notation with that many digits; decimals < 0 gives the shortest text
/// that parses back to the same double.
inline std::string format_number(double x, int decimals = -1) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[128];
    std::to_chars_result res{};
    if (decimals < 0) {
        res = std::to_chars(buf, buf + sizeof buf, x);
    } else {
        res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
    }
    if (res.ec != std::errc{}) return "overflow";
    std::string s(buf, res.ptr);
    if (s == "-0" || (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos)) {
        s.erase(0, 1);  // no negative zero in reports
    }
    return s;
}

}  // namespace cyberalloc
