#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gfcsim::analysis {

/// Ordered observations (t, x_t) with strictly increasing t.
class TimeSeries {
public:
    struct Point {
        double t;
        double x;
    };

    TimeSeries() = default;
    /// Indices 0..n-1.
    static TimeSeries from_values(std::span<const double> xs);

    /// Throws std::invalid_argument unless t exceeds the last index.
    void push(double t, double x);

    const std::vector<Point>& points() const { return points_; }
    std::vector<double> values() const;
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<Point> points_;
};

struct SmoothingParams {
    double alpha = 0.05;
};

/// x̂_0 = x̂_1 = x_0, then x̂_t = α·x_{t-1} + (1-α)·x̂_{t-1}. Indices are kept.
TimeSeries exp_smooth(const TimeSeries& series, SmoothingParams params);
std::vector<double> exp_smooth(std::span<const double> xs, double alpha);

struct WelchResult {
    double mean_a = 0, mean_b = 0;
    std::size_t n_a = 0, n_b = 0;
    double t = 0;
    double df = 0;
    /// P(T > t) under H0 (mean_a <= mean_b).
    double p_one_sided = 1;
};

/// Welch's unequal-variance t-test. Needs at least two samples per side.
WelchResult welch_test(std::span<const double> a, std::span<const double> b);

/// Lomb-Scargle periodogram peak over periods [min_period, max_period]
/// sampled at `step`. Returns the period with the largest normalised power.
double dominant_period(std::span<const double> times, std::span<const double> values, double min_period,
                       double max_period, double step);

}  // namespace gfcsim::analysis
