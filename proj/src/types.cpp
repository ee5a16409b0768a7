#include "tollsim/types.hpp"

#include <cmath>
#include <cstdio>

namespace tollsim {

std::string_view to_string(Mode mode)
{
    switch (mode) {
    case Mode::car: return "car";
    case Mode::pt: return "pt";
    case Mode::walk: return "walk";
    case Mode::bike: return "bike";
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view text)
{
    for (auto m : kAllModes)
        if (to_string(m) == text)
            return m;
    return std::nullopt;
}

std::string format_clock(Seconds t)
{
    long total = std::lround(t);
    bool negative = total < 0;
    if (negative)
        total = -total;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%02ld:%02ld:%02ld", negative ? "-" : "", total / 3600,
                  (total / 60) % 60, total % 60);
    return buf;
}

}  // namespace tollsim
