#pragma once

#include "gfcsim/simnet/event_log.hpp"
#include "gfcsim/simnet/network.hpp"
#include "gfcsim/simnet/rng.hpp"
#include "gfcsim/simnet/scheduler.hpp"
#include "gfcsim/simnet/topology.hpp"

namespace gfcsim::sim {

/// Shared services of one simulation instance.
struct SimContext {
    Scheduler& sched;
    RngStreams& rng;
    EventLog& log;
    Topology& topo;
    Network& net;

    SimTime now() const { return sched.now(); }
};

}  // namespace gfcsim::sim
