#pragma once

#include <vector>

#include "gfcsim/simnet/rng.hpp"
#include "gfcsim/simnet/time.hpp"

namespace gfcsim::scanner {

/// What a scanner source address looks like after the scan: either it stays
/// dark, or an "underlying" host starts answering pings a few minutes later
/// with a slightly different TTL.
struct TtlSpoofModel {
    double live_probability = 0.20;
    int onset_min_minutes = 1;
    int onset_max_minutes = 15;
    int typical_delta = 1;
    /// 14 of the 85 live hosts were outliers.
    double outlier_probability = 14.0 / 85.0;
    std::vector<int> outlier_deltas{65, 192};
};

struct SpoofArtifact {
    bool live = false;
    Seconds onset = 0;  // after scan completion
    int ttl_delta = 0;  // reply ttl minus ttl seen during the scan
};

/// Four draws per artifact whatever the outcome (a uniform_int rejection, odds
/// below 2^-59 for these ranges, would add one).
SpoofArtifact draw_spoof_artifact(const TtlSpoofModel& model, RngStream& rng);

enum class ScanOutcome { speaks_tor, no_tor, unreachable };

const char* to_string(ScanOutcome o);

}  // namespace gfcsim::scanner
