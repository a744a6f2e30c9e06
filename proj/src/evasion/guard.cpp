#include "gfcsim/evasion/guard.hpp"

#include <stdexcept>

namespace gfcsim::evasion {

void GuardPolicy::validate() const {
    if (syn_accept_index < 1) throw std::invalid_argument("syn-accept-index must be at least 1");
    if (synack_window_override && *synack_window_override == 0)
        throw std::invalid_argument("synack-window-override 0 would stall every connection");
    if (period <= 0) throw std::invalid_argument("guard period must be positive");
    if (deaf_window < 0 || deaf_window >= period)
        throw std::invalid_argument("deaf-window-s must lie in [0, period)");
    if (idle_reset < 0) throw std::invalid_argument("idle reset must be non-negative");
}

const char* to_string(GuardDecision d) { return d == GuardDecision::accept ? "accept" : "silent-drop"; }

GuardDecision SynGuard::filter_syn(const Segment& seg, SimTime now) {
    auto& c = counters_[seg.src];
    if (c.syns > 0 && now - c.last > policy_.idle_reset) c.syns = 0;
    ++c.syns;
    c.last = now;
    if (in_deaf_window(now)) return GuardDecision::silent_drop;
    return c.syns >= policy_.syn_accept_index ? GuardDecision::accept : GuardDecision::silent_drop;
}

int SynGuard::count(const Tuple& client) const {
    auto it = counters_.find(client);
    return it == counters_.end() ? 0 : it->second.syns;
}

Segment rewrite_synack_window(const Segment& seg, const GuardPolicy& policy) {
    Segment out = seg;
    if (seg.is_synack() && policy.synack_window_override) out.window = *policy.synack_window_override;
    return out;
}

}  // namespace gfcsim::evasion
