#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gfcsim/simnet/address.hpp"
#include "gfcsim/simnet/rng.hpp"
#include "gfcsim/simnet/segment.hpp"
#include "gfcsim/simnet/time.hpp"

namespace gfcsim::blocktable {

enum class BlockMode { synack_drop, ip_drop, rst_on_connect };

/// How an entry got into the table. Only scan-origin entries are revalidated.
enum class BlockOrigin { scan, consensus, static_list };

const char* to_string(BlockMode m);
const char* to_string(BlockOrigin o);

struct BlockEntry {
    Tuple tuple;  // port is ignored for ip_drop
    BlockMode mode = BlockMode::synack_drop;
    BlockOrigin origin = BlockOrigin::scan;
    SimTime added_at;
    SimTime last_successful_revalidation;
    std::optional<SimTime> failure_streak_started;
    SimTime last_check;  // queue cycle of the most recent probe or add
};

struct BlockPolicy {
    Seconds expiry_threshold = 43200;
    Seconds revalidation_period = 900;
    Seconds consensus_ingest_period = 259200;
    double consensus_miss_rate = 0.016;
};

enum class Enforcement { pass, drop, rst };

enum class RevalidationResult { kept, streak_started, streak_continues, removed, unknown };

struct IngestResult {
    std::size_t listed = 0;
    std::size_t added = 0;
    std::size_t missed = 0;
};

class BlockTable {
public:
    explicit BlockTable(BlockPolicy policy = {}) : policy_(policy) {}

    /// Idempotent. Re-adding refreshes the revalidation state. `cycle` is the
    /// queue drain the confirming scan belonged to (defaults to `now`).
    const BlockEntry& add(const Tuple& tuple, BlockMode mode, BlockOrigin origin, SimTime now,
                          std::optional<SimTime> cycle = std::nullopt);
    bool remove(const Tuple& tuple, BlockMode mode);

    /// Decides what the border does with `seg`. `dynamic_enabled` false
    /// suspends scan-origin entries (censor outage).
    Enforcement enforce(const Segment& seg, bool dynamic_enabled = true) const;

    /// Applies one probe result to a scan-origin entry. `cycle` is the drain
    /// the probe was queued for; streak arithmetic uses it.
    RevalidationResult revalidate(const Tuple& tuple, SimTime cycle, bool probe_succeeded);

    /// Scan-origin synack-drop tuples whose last check is a full period old.
    std::vector<Tuple> due_for_revalidation(SimTime cycle) const;

    /// Blocks every listed relay except a fresh Bernoulli(miss-rate) subset.
    IngestResult ingest_consensus(std::span<const Tuple> relays, SimTime now, RngStream& rng);

    const BlockEntry* find(const Tuple& tuple, BlockMode mode) const;
    bool blocks_address(Address a) const { return ip_entries_.count(a) != 0; }
    std::size_t size() const { return tuple_entries_.size() + ip_entries_.size(); }
    const BlockPolicy& policy() const { return policy_; }

private:
    BlockPolicy policy_;
    // (tuple, mode) so a tuple can be both synack- and rst-blocked in principle.
    std::map<std::pair<Tuple, BlockMode>, BlockEntry> tuple_entries_;
    std::map<Address, BlockEntry> ip_entries_;
};

}  // namespace gfcsim::blocktable
