#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gfcsim/analysis/log_analysis.hpp"
#include "gfcsim/analysis/report.hpp"
#include "gfcsim/analysis/series.hpp"
#include "support.hpp"

using namespace gfcsim;
using namespace gfcsim::analysis;

namespace {

/// Direct transcription of the recursion, used as the reference.
std::vector<double> smooth_reference(const std::vector<double>& x, double a) {
    std::vector<double> s(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (t < 2) s[t] = x[0];
        else s[t] = a * x[t - 1] + (1 - a) * s[t - 1];
    }
    return s;
}

EventLogRecord scan_at(Seconds t) {
    const Seconds cycle = t / 900 * 900;
    return {SimTime{t}, EventKind::scan_started,
            {{"cycle", std::to_string(cycle)}, {"delay", std::to_string(t - cycle)}, {"source", "60.0.0.1"},
             {"master", "0"}, {"as", "AS4837"}, {"target", "141.20.0.5:443"}}};
}

EventLogRecord established(Seconds t, const std::string& target, int round, const char* region = "inside-china") {
    return {SimTime{t}, EventKind::connection_established,
            {{"client", "c"}, {"layer", "tcp"}, {"region", region}, {"round", std::to_string(round)}, {"target", target}}};
}

EventLogRecord failed(Seconds t, const std::string& target, int round) {
    return {SimTime{t}, EventKind::connection_failed,
            {{"client", "c"}, {"layer", "tcp"}, {"region", "inside-china"}, {"round", std::to_string(round)},
             {"target", target}, {"reason", "syn-timeout"}}};
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("smoothing a short series by hand") {
    const std::vector<double> x{10, 20, 30};
    CHECK(exp_smooth(x, 0.5) == std::vector<double>{10, 10, 15});
    CHECK(exp_smooth(std::vector<double>{}, 0.5).empty());
    CHECK(exp_smooth(std::vector<double>{4}, 0.5) == std::vector<double>{4});
    CHECK_THROWS_AS(exp_smooth(x, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(exp_smooth(x, 1.1), std::invalid_argument);
}

TEST_CASE("alpha 0 holds the first value, alpha 1 lags by one") {
    const std::vector<double> x{3, 1, 4, 1, 5, 9, 2, 6};
    for (double v : exp_smooth(x, 0.0)) CHECK(v == 3);
    const auto s = exp_smooth(x, 1.0);
    CHECK(s[0] == 3);
    for (std::size_t t = 1; t < x.size(); ++t) CHECK(s[t] == x[t - 1]);
}

TEST_CASE("smoothing matches the reference recursion bit for bit") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> val(0, 60), alpha(0, 1);
    std::uniform_int_distribution<int> len(0, 200);
    for (int c = 0; c < 1000; ++c) {
        std::vector<double> x(len(gen));
        for (auto& v : x) v = val(gen);
        const double a = alpha(gen);
        REQUIRE(exp_smooth(x, a) == smooth_reference(x, a));
    }
}

TEST_CASE("smoothing is shift-equivariant and stays within the data range") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> val(0, 15);
    for (int c = 0; c < 200; ++c) {
        std::vector<double> x(50), shifted(50);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = val(gen);
            shifted[i] = x[i] + 30;
        }
        const auto a = exp_smooth(x, 0.05), b = exp_smooth(shifted, 0.05);
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        for (std::size_t i = 0; i < x.size(); ++i) {
            REQUIRE(b[i] - a[i] == doctest::Approx(30).epsilon(1e-12));
            REQUIRE(a[i] >= *lo - 1e-12);
            REQUIRE(a[i] <= *hi + 1e-12);
        }
    }
}

TEST_CASE("time series keeps indices through smoothing") {
    TimeSeries s;
    s.push(1, 10);
    s.push(5, 20);
    CHECK_THROWS_AS(s.push(5, 1), std::invalid_argument);
    const auto out = exp_smooth(s, {0.5});
    REQUIRE(out.size() == 2);
    CHECK(out[1].t == 5);
    CHECK(out[1].x == 10);
}

TEST_CASE("Welch test against independently computed values") {
    const std::vector<double> a{2, 4, 6, 8, 10}, b{1, 2, 3, 4, 5};
    const auto r = welch_test(a, b);
    CHECK(r.t == doctest::Approx(1.8973665961010275).epsilon(1e-12));
    CHECK(r.p_one_sided == doctest::Approx(0.05376559746531359).epsilon(1e-9));
    const std::vector<double> c{10.1, 12.3, 9.8, 14.2, 11.0, 13.3}, d{8.2, 9.9, 7.5, 10.1};
    const auto q = welch_test(c, d);
    CHECK(q.t == doctest::Approx(2.9582819218970005).epsilon(1e-12));
    CHECK(q.p_one_sided == doctest::Approx(0.009259060603820762).epsilon(1e-9));
    CHECK_THROWS_AS(welch_test(std::vector<double>{1}, b), std::invalid_argument);
}

TEST_CASE("periodogram finds a daily sinusoid in irregular samples") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> jitter(0, 3600);
    std::normal_distribution<double> noise(0, 0.5);
    std::vector<double> t, x;
    for (double h = 0; h < 7 * 24; h += 1.5) {
        t.push_back(h * 3600 + jitter(gen));
        x.push_back(std::sin(2 * std::numbers::pi * t.back() / 86400) + noise(gen));
    }
    const double p = dominant_period(t, x, 2 * 3600, 72 * 3600, 360);
    CHECK(std::abs(p - 86400) < 1.7 * 3600);
}

TEST_CASE("scan timing: minute of hour and quarter") {
    const std::vector<EventLogRecord> log{scan_at(86580), scan_at(900 + 899), scan_at(3600 * 5 + 45 * 60)};
    const auto t = scan_timings(log);
    REQUIRE(t.size() == 3);
    CHECK(t[0].interval == 0);
    CHECK(t[0].minute == 3.0);
    CHECK(t[1].interval == 1);
    CHECK(t[1].minute == doctest::Approx(29.9833).epsilon(1e-4));
    CHECK(t[2].interval == 3);
    CHECK(scan_timing_series(log, 3).size() == 1);
    CHECK_THROWS_AS(scan_timing_series(log, 4), std::invalid_argument);
}

TEST_CASE("usage curve: empty logs are all zero, one bucket holds the total") {
    const auto none = usage_curve({}, 3600, 4 * 3600);
    REQUIRE(none.size() == 4);
    for (const auto& p : none.points()) CHECK(p.x == 0);
    const std::vector<EventLogRecord> log{established(10, "a:1", 0), established(4000, "a:1", 1),
                                          established(4001, "a:1", 1, "outside-china"),
                                          established(7300, "a:1", 2)};
    const auto hourly = usage_curve(log, 3600);
    REQUIRE(hourly.size() == 3);
    CHECK(hourly.values() == std::vector<double>{1, 1, 1});
    const auto whole = usage_curve(log, 10000);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0].x == 3);
}

TEST_CASE("reachability counts targets per round") {
    const std::vector<EventLogRecord> log{established(10, "a:1", 0), failed(70, "b:1", 0), failed(80, "c:1", 0),
                                          failed(1000, "a:1", 1), established(1010, "b:1", 1),
                                          failed(1080, "c:1", 1)};
    const auto r = reachability_report(log);
    CHECK(r.number("targets") == 3);
    CHECK(r.number("rounds") == 2);
    CHECK(r.number("still-reachable-after-reingest") == 0);
    CHECK(r.tables.count("rounds") == 1);
}

TEST_CASE("CSV quoting follows RFC 4180") {
    CsvTable t({"a", "b"});
    t.add_row({"plain", "with,comma"});
    t.add_row({"say \"hi\"", "line\nbreak"});
    CHECK(t.str() == "a,b\r\nplain,\"with,comma\"\r\n\"say \"\"hi\"\"\",\"line\nbreak\"\r\n");
    CHECK_THROWS_AS(t.add_row({"x"}), std::invalid_argument);
    CHECK(format_double(-0.0, 2) == "0.00");
    CHECK(format_double(1.0 / 3, 3) == "0.333");
}

TEST_CASE("reports are deterministic functions of the log") {
    sim::RunOptions o;
    o.duration = 2 * 86400;
    const auto sim = testing::run(testing::bundled("timing-diurnal"), o);
    const auto a = smooth_report(sim->log().records(), {0.05});
    const auto b = smooth_report(sim->log().records(), {0.05});
    CHECK(a.summary() == b.summary());
    REQUIRE(a.tables.size() == 4);
    for (const auto& [name, table] : a.tables) CHECK(table.str() == b.tables.at(name).str());
    CHECK(a.tables.at("interval0").header() == std::vector<std::string>{"index", "time-s", "minute", "smoothed"});
}

}  // TEST_SUITE
