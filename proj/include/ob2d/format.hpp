#pragma once

#include <charconv>
#include <string>

namespace ob2d {

/// Shortest decimal form that reads back to the same double ("0.5", "1e-06").
inline std::string short_number(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace ob2d
