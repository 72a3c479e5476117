#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include "singshock/errors.hpp"

namespace singshock {

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
    double x = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ConfigError("cannot parse number \"" + std::string(text) + "\"");
    return x;
}

} // namespace singshock
