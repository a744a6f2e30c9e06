#pragma once

#include <cstdint>
#include <optional>

#include "gfcsim/analysis/report.hpp"
#include "gfcsim/scenario/scenario.hpp"

namespace gfcsim::analysis {

/// Runs `s` with its consensus relay set resized to `relay_count` and reports
/// the reachability seen by inside-china clients.
ExperimentReport run_reachability_experiment(const scenario::Scenario& s, int relay_count,
                                             std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace gfcsim::analysis
