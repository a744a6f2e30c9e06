#include "gfcsim/analysis/series.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace gfcsim::analysis {

TimeSeries TimeSeries::from_values(std::span<const double> xs) {
    TimeSeries s;
    s.points_.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) s.points_.push_back({static_cast<double>(i), xs[i]});
    return s;
}

void TimeSeries::push(double t, double x) {
    if (!points_.empty() && !(t > points_.back().t)) throw std::invalid_argument("time series indices must increase");
    points_.push_back({t, x});
}

std::vector<double> TimeSeries::values() const {
    std::vector<double> v;
    v.reserve(points_.size());
    for (const auto& p : points_) v.push_back(p.x);
    return v;
}

std::vector<double> exp_smooth(std::span<const double> xs, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in [0, 1]");
    std::vector<double> out(xs.size());
    if (xs.empty()) return out;
    out[0] = xs[0];
    if (xs.size() > 1) out[1] = xs[0];
    for (std::size_t t = 2; t < xs.size(); ++t) out[t] = alpha * xs[t - 1] + (1.0 - alpha) * out[t - 1];
    return out;
}

TimeSeries exp_smooth(const TimeSeries& series, SmoothingParams params) {
    const auto xs = series.values();
    const auto sm = exp_smooth(xs, params.alpha);
    TimeSeries out;
    for (std::size_t i = 0; i < sm.size(); ++i) out.push(series[i].t, sm[i]);
    return out;
}

namespace {

std::pair<double, double> mean_var(std::span<const double> v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, ss / static_cast<double>(v.size() - 1)};
}

}  // namespace

WelchResult welch_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch test needs two samples per group");
    WelchResult r;
    r.n_a = a.size();
    r.n_b = b.size();
    const auto [ma, va] = mean_var(a);
    const auto [mb, vb] = mean_var(b);
    r.mean_a = ma;
    r.mean_b = mb;
    const double sa = va / static_cast<double>(a.size());
    const double sb = vb / static_cast<double>(b.size());
    const double se2 = sa + sb;
    if (se2 == 0.0) {
        r.t = ma > mb ? INFINITY : (ma < mb ? -INFINITY : 0.0);
        r.df = static_cast<double>(a.size() + b.size() - 2);
        r.p_one_sided = ma > mb ? 0.0 : 1.0;
        return r;
    }
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 /
           (sa * sa / static_cast<double>(a.size() - 1) + sb * sb / static_cast<double>(b.size() - 1));
    boost::math::students_t dist(r.df);
    r.p_one_sided = boost::math::cdf(boost::math::complement(dist, r.t));
    return r;
}

double dominant_period(std::span<const double> times, std::span<const double> values, double min_period,
                       double max_period, double step) {
    if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
    if (times.size() < 3) throw std::invalid_argument("periodogram needs at least three points");
    if (!(min_period > 0 && max_period >= min_period && step > 0)) throw std::invalid_argument("bad period grid");
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double best_period = min_period;
    double best_power = -1;
    const auto steps = static_cast<std::size_t>(std::floor((max_period - min_period) / step + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) {
        const double period = min_period + step * static_cast<double>(i);
        const double w = 2.0 * std::numbers::pi / period;
        double s2 = 0, c2 = 0;
        for (double t : times) {
            s2 += std::sin(2 * w * t);
            c2 += std::cos(2 * w * t);
        }
        const double tau = std::atan2(s2, c2) / (2 * w);
        double yc = 0, ys = 0, cc = 0, ss = 0;
        for (std::size_t j = 0; j < times.size(); ++j) {
            const double c = std::cos(w * (times[j] - tau));
            const double s = std::sin(w * (times[j] - tau));
            const double y = values[j] - mean;
            yc += y * c;
            ys += y * s;
            cc += c * c;
            ss += s * s;
        }
        double power = 0;
        if (cc > 0) power += yc * yc / cc;
        if (ss > 0) power += ys * ys / ss;
        if (power > best_power) {
            best_power = power;
            best_period = period;
        }
    }
    return best_period;
}

}  // namespace gfcsim::analysis
