#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "gfcsim/simnet/address.hpp"
#include "gfcsim/simnet/segment.hpp"
#include "gfcsim/simnet/time.hpp"

namespace gfcsim::evasion {

/// Bridge-side packet guard: SYN retransmission filter, deaf window after
/// each queue multiple, and SYN/ACK window rewriting.
struct GuardPolicy {
    /// SYNs from a client tuple are dropped until this many have arrived.
    int syn_accept_index = 3;
    /// Seconds after each 900 s multiple during which every new SYN is dropped.
    Seconds deaf_window = 0;
    std::optional<std::uint16_t> synack_window_override;
    Seconds idle_reset = 60;
    Seconds period = kQueuePeriod;

    /// Throws std::invalid_argument on an unusable policy (index < 1,
    /// override 0, deaf window outside [0, period)).
    void validate() const;
};

enum class GuardDecision { accept, silent_drop };

const char* to_string(GuardDecision d);

class SynGuard {
public:
    explicit SynGuard(GuardPolicy policy) : policy_(policy) { policy_.validate(); }

    /// Counts the SYN against its source tuple and decides. Dropped SYNs get
    /// no answer of any kind.
    GuardDecision filter_syn(const Segment& seg, SimTime now);
    /// The connection from `client` completed; its counter starts over.
    void on_established(const Tuple& client) { counters_.erase(client); }

    bool in_deaf_window(SimTime now) const {
        return policy_.deaf_window > 0 && now.sec % policy_.period < policy_.deaf_window;
    }
    int count(const Tuple& client) const;
    const GuardPolicy& policy() const { return policy_; }

private:
    struct Counter {
        int syns = 0;
        SimTime last;
    };

    GuardPolicy policy_;
    std::map<Tuple, Counter> counters_;
};

/// Copy of a SYN/ACK with only the window field replaced.
Segment rewrite_synack_window(const Segment& seg, const GuardPolicy& policy);

}  // namespace gfcsim::evasion
