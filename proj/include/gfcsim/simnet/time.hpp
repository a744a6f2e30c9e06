#pragma once

#include <compare>
#include <cstdint>

namespace gfcsim {

using Seconds = std::int64_t;

/// Simulated wall clock, whole seconds since scenario start.
struct SimTime {
    Seconds sec = 0;

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime operator+(Seconds d) const { return SimTime{sec + d}; }
    constexpr SimTime operator-(Seconds d) const { return SimTime{sec - d}; }
    constexpr Seconds operator-(SimTime o) const { return sec - o.sec; }
};

inline constexpr Seconds kQueuePeriod = 900;
inline constexpr Seconds kDay = 86400;

/// Smallest multiple of `period` strictly greater than `t`.
constexpr SimTime next_multiple(SimTime t, Seconds period = kQueuePeriod) {
    return SimTime{(t.sec / period + 1) * period};
}

}  // namespace gfcsim
