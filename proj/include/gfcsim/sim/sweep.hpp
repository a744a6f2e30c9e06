#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gfcsim/scenario/scenario.hpp"
#include "gfcsim/sim/simulation.hpp"

namespace gfcsim::sim {

struct SweepResult {
    std::uint64_t seed = 0;
    std::uint64_t log_digest = 0;  ///< FNV-1a over the serialised event log
    std::size_t records = 0;
    std::map<std::string, std::string> summary;
};

/// Per-run hook, called on the finished instance from the worker that ran it.
using SweepVisitor = std::function<void(const Simulation&, SweepResult&)>;

/// Runs one instance per seed, in order, on the calling thread.
std::vector<SweepResult> sweep_serial(const scenario::Scenario& s, const std::vector<std::uint64_t>& seeds,
                                      const SweepVisitor& visit = {});
/// Same results as sweep_serial, with instances spread over OpenMP threads.
std::vector<SweepResult> sweep_parallel(const scenario::Scenario& s, const std::vector<std::uint64_t>& seeds,
                                        const SweepVisitor& visit = {});

std::uint64_t log_digest(const EventLog& log);

}  // namespace gfcsim::sim
