#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfcsim/analysis/report.hpp"
#include "gfcsim/analysis/series.hpp"
#include "gfcsim/simnet/event_log.hpp"

namespace gfcsim::analysis {

using Records = std::span<const EventLogRecord>;

struct ScanTiming {
    SimTime time;
    double minute;  ///< minute of the hour, fractional
    int interval;   ///< quarter of the hour, 0..3
};

std::vector<ScanTiming> scan_timings(Records log);

/// Scans whose minute of the hour falls in [15k, 15k+15), indexed by arrival
/// order, valued by minute of the hour.
TimeSeries scan_timing_series(Records log, int k);

struct DiurnalWindows {
    double evening_from = 18, evening_to = 24;
    double night_from = 2, night_to = 6;
};

/// Welch test of queue delay (seconds past the quarter hour) for scans in the
/// evening window against scans in the night window.
WelchResult diurnal_delay_test(Records log, DiurnalWindows w = {});

/// timing: per-interval counts and ranges, the diurnal test, and a raw table.
ExperimentReport timing_report(Records log);
/// smooth: one table per interval with the raw and smoothed minute, plus the
/// dominant period of each smoothed panel.
ExperimentReport smooth_report(Records log, SmoothingParams params);

struct ReachabilityFilter {
    std::optional<std::string> region;
    std::optional<std::string> client;
};

/// Reachability of each target per client round. Targets count as reachable
/// in a round when a connection-established record exists for them.
ExperimentReport reachability_report(Records log, const ReachabilityFilter& filter = {});

ExperimentReport scanner_stats_report(Records log);

/// Per-bucket connection-established counts of inside-china clients over
/// [0, horizon). Without a horizon the last record bounds the series.
TimeSeries usage_curve(Records log, Seconds bucket, std::optional<Seconds> horizon = std::nullopt);
ExperimentReport usage_report(Records log, Seconds bucket, std::optional<Seconds> horizon = std::nullopt);

}  // namespace gfcsim::analysis
