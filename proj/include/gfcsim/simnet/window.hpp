#pragma once

#include <vector>

#include "gfcsim/simnet/time.hpp"

namespace gfcsim {

/// Half-open interval [from, to) of simulated time.
struct TimeWindow {
    SimTime from;
    SimTime to;

    constexpr bool contains(SimTime t) const { return from <= t && t < to; }
};

inline bool any_contains(const std::vector<TimeWindow>& windows, SimTime t) {
    for (const auto& w : windows) {
        if (w.contains(t)) return true;
    }
    return false;
}

}  // namespace gfcsim
