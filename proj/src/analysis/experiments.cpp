#include "gfcsim/analysis/experiments.hpp"

#include <stdexcept>

#include "gfcsim/analysis/log_analysis.hpp"
#include "gfcsim/sim/simulation.hpp"

namespace gfcsim::analysis {

ExperimentReport run_reachability_experiment(const scenario::Scenario& s, int relay_count,
                                             std::optional<std::uint64_t> seed) {
    if (!s.blocking.consensus.enabled) throw std::invalid_argument("scenario has no consensus");
    if (relay_count < 0) throw std::invalid_argument("relay count must be non-negative");
    auto copy = s;
    bool found = false;
    for (auto& rs : copy.relay_sets) {
        if (rs.name != copy.blocking.consensus.relay_set) continue;
        rs.count = relay_count;
        found = true;
    }
    if (!found) throw std::invalid_argument("consensus relay set is missing");
    sim::Simulation run(std::move(copy), sim::RunOptions{seed, std::nullopt});
    run.run();
    auto rep = reachability_report(run.log().records(), ReachabilityFilter{std::string("inside-china"), std::nullopt});
    rep.scenario = s.meta.name;
    rep.seed = run.seed();
    rep.set("relay-count", static_cast<std::int64_t>(relay_count));
    return rep;
}

}  // namespace gfcsim::analysis
