#include "gfcsim/sim/sweep.hpp"

#include <exception>
#include <mutex>

namespace gfcsim::sim {
namespace {

SweepResult run_one(const scenario::Scenario& s, std::uint64_t seed, const SweepVisitor& visit) {
    Simulation sim(s, RunOptions{seed, std::nullopt});
    sim.run();
    SweepResult r;
    r.seed = seed;
    r.log_digest = log_digest(sim.log());
    r.records = sim.log().size();
    r.summary = sim.summary();
    if (visit) visit(sim, r);
    return r;
}

}  // namespace

std::uint64_t log_digest(const EventLog& log) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& r : log.records()) {
        for (unsigned char c : EventLog::format(r)) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= '\n';
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<SweepResult> sweep_serial(const scenario::Scenario& s, const std::vector<std::uint64_t>& seeds,
                                      const SweepVisitor& visit) {
    std::vector<SweepResult> out;
    out.reserve(seeds.size());
    for (auto seed : seeds) out.push_back(run_one(s, seed, visit));
    return out;
}

std::vector<SweepResult> sweep_parallel(const scenario::Scenario& s, const std::vector<std::uint64_t>& seeds,
                                        const SweepVisitor& visit) {
    std::vector<SweepResult> out(seeds.size());
    std::exception_ptr error;
    std::mutex error_mu;
    const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = run_one(s, seeds[static_cast<std::size_t>(i)], visit);
        } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace gfcsim::sim
