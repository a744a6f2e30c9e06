#pragma once

#include "gfcsim/simnet/time.hpp"

namespace gfcsim::scanner {

/// Queue-processing load over the day; scales the worst-case delay between a
/// 15-minute multiple and the moment a queued scan actually starts.
struct LoadCurve {
    enum class Shape { flat, raised_cosine };

    Shape shape = Shape::raised_cosine;
    Seconds max_extra_delay = 180;
    double peak_hour = 20.0;
    Seconds period = kDay;

    /// Load factor in [0, 1]. Raised cosine: 0.5 * (1 + cos(2*pi*(h - peak)/24)).
    double factor(SimTime t) const;
    /// Upper bound for the attempt delay of a job scheduled at `t`.
    Seconds max_delay(SimTime t) const;
};

}  // namespace gfcsim::scanner
