#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_set>
#include <vector>

#include "gfcsim/simnet/time.hpp"

namespace gfcsim {

using EventHandle = std::uint64_t;

/// Discrete-event core. Events at equal timestamps fire in insertion order.
class Scheduler {
public:
    using Action = std::function<void()>;

    /// Throws SimulationError when `at` lies in the past.
    EventHandle schedule(SimTime at, Action action);
    EventHandle schedule_in(Seconds delay, Action action) { return schedule(now_ + delay, std::move(action)); }
    void cancel(EventHandle h) { cancelled_.insert(h); }

    /// Runs every event with time <= `until`. The clock ends at `until`.
    void run_until(SimTime until);
    /// Runs one event; false when the queue is empty.
    bool step();

    SimTime now() const { return now_; }
    std::size_t pending() const { return queue_.size(); }
    std::uint64_t executed() const { return executed_; }

private:
    struct Entry {
        SimTime at;
        EventHandle seq;
        Action action;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            return a.at != b.at ? a.at > b.at : a.seq > b.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
    std::unordered_set<EventHandle> cancelled_;
    SimTime now_{};
    EventHandle next_seq_ = 0;
    std::uint64_t executed_ = 0;
};

}  // namespace gfcsim
