#include "gfcsim/scanner/load_curve.hpp"

#include <cmath>
#include <numbers>

namespace gfcsim::scanner {

double LoadCurve::factor(SimTime t) const {
    if (shape == Shape::flat) return 1.0;
    const double hours = static_cast<double>(((t.sec % period) + period) % period) / 3600.0;
    const double day_hours = static_cast<double>(period) / 3600.0;
    return 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * (hours - peak_hour) / day_hours));
}

Seconds LoadCurve::max_delay(SimTime t) const {
    return static_cast<Seconds>(std::floor(static_cast<double>(max_extra_delay) * factor(t)));
}

}  // namespace gfcsim::scanner
