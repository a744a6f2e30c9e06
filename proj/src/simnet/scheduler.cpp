#include "gfcsim/simnet/scheduler.hpp"

#include <string>

#include "gfcsim/simnet/rng.hpp"

namespace gfcsim {

EventHandle Scheduler::schedule(SimTime at, Action action) {
    if (at < now_) {
        throw SimulationError("event scheduled in the past: t=" + std::to_string(at.sec) +
                              " < now=" + std::to_string(now_.sec));
    }
    const EventHandle h = next_seq_++;
    queue_.push(Entry{at, h, std::move(action)});
    return h;
}

bool Scheduler::step() {
    while (!queue_.empty()) {
        // Moving out of top() is safe: the node is popped immediately.
        Entry e = std::move(const_cast<Entry&>(queue_.top()));
        queue_.pop();
        if (auto it = cancelled_.find(e.seq); it != cancelled_.end()) {
            cancelled_.erase(it);
            continue;
        }
        now_ = e.at;
        ++executed_;
        e.action();
        return true;
    }
    return false;
}

void Scheduler::run_until(SimTime until) {
    while (!queue_.empty() && queue_.top().at <= until) {
        if (!step()) break;
    }
    if (now_ < until) now_ = until;
}

}  // namespace gfcsim
