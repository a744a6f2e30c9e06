#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gfcsim/blocktable/block_table.hpp"
#include "gfcsim/scanner/scan_queue.hpp"
#include "gfcsim/scanner/scanner_pool.hpp"
#include "gfcsim/scenario/scenario.hpp"
#include "gfcsim/sim/client_app.hpp"
#include "gfcsim/sim/context.hpp"
#include "gfcsim/sim/gfc.hpp"
#include "gfcsim/sim/host.hpp"
#include "gfcsim/sim/scanner_service.hpp"

namespace gfcsim::sim {

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<Seconds> duration;
};

/// One isolated simulation instance. The run covers [0, duration).
class Simulation {
public:
    explicit Simulation(scenario::Scenario s, RunOptions opts = {});
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    void run();

    const EventLog& log() const { return log_; }
    const scenario::Scenario& scenario() const { return scenario_; }
    std::uint64_t seed() const { return seed_; }
    Seconds duration() const { return duration_; }
    const blocktable::BlockTable& block_table() const { return table_; }
    Host* host(const std::string& name);
    const Gfc& gfc() const { return *gfc_; }
    const ScannerService* scanner() const { return scanner_.get(); }

    /// Run totals, keyed by metric name.
    std::map<std::string, std::string> summary() const;

private:
    void build();
    void schedule_blocking();

    scenario::Scenario scenario_;
    std::uint64_t seed_;
    Seconds duration_;
    Scheduler sched_;
    RngStreams rng_;
    EventLog log_;
    Topology topo_;
    Network net_;
    SimContext ctx_;
    blocktable::BlockTable table_;
    std::unique_ptr<scanner::ScanQueue> queue_;
    std::unique_ptr<scanner::ScannerPool> pool_;
    std::vector<std::unique_ptr<Host>> hosts_;
    std::unique_ptr<Gfc> gfc_;
    std::unique_ptr<ScannerService> scanner_;
    std::vector<std::unique_ptr<ClientApp>> clients_;
    bool ran_ = false;
};

/// Builds, runs, and returns the finished instance.
std::unique_ptr<Simulation> run_scenario(const scenario::Scenario& s, RunOptions opts = {});

}  // namespace gfcsim::sim
