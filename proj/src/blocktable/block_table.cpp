#include "gfcsim/blocktable/block_table.hpp"

namespace gfcsim::blocktable {

const char* to_string(BlockMode m) {
    switch (m) {
        case BlockMode::synack_drop: return "synack-drop";
        case BlockMode::ip_drop: return "ip-drop";
        case BlockMode::rst_on_connect: return "rst-on-connect";
    }
    return "?";
}

const char* to_string(BlockOrigin o) {
    switch (o) {
        case BlockOrigin::scan: return "scan";
        case BlockOrigin::consensus: return "consensus";
        case BlockOrigin::static_list: return "static";
    }
    return "?";
}

const BlockEntry& BlockTable::add(const Tuple& tuple, BlockMode mode, BlockOrigin origin, SimTime now,
                                  std::optional<SimTime> cycle) {
    BlockEntry* e;
    if (mode == BlockMode::ip_drop) {
        auto [it, inserted] = ip_entries_.try_emplace(tuple.addr);
        e = &it->second;
        if (inserted) e->added_at = now;
    } else {
        auto [it, inserted] = tuple_entries_.try_emplace({tuple, mode});
        e = &it->second;
        if (inserted) {
            e->added_at = now;
            e->origin = origin;
        } else if (origin == BlockOrigin::scan) {
            // A scan confirmation upgrades a consensus entry to a revalidated one.
            e->origin = origin;
        }
    }
    e->tuple = tuple;
    e->mode = mode;
    if (mode == BlockMode::ip_drop) e->origin = origin;
    e->last_successful_revalidation = now;
    e->failure_streak_started.reset();
    e->last_check = cycle.value_or(now);
    return *e;
}

bool BlockTable::remove(const Tuple& tuple, BlockMode mode) {
    if (mode == BlockMode::ip_drop) return ip_entries_.erase(tuple.addr) != 0;
    return tuple_entries_.erase({tuple, mode}) != 0;
}

const BlockEntry* BlockTable::find(const Tuple& tuple, BlockMode mode) const {
    if (mode == BlockMode::ip_drop) {
        auto it = ip_entries_.find(tuple.addr);
        return it == ip_entries_.end() ? nullptr : &it->second;
    }
    auto it = tuple_entries_.find({tuple, mode});
    return it == tuple_entries_.end() ? nullptr : &it->second;
}

Enforcement BlockTable::enforce(const Segment& seg, bool dynamic_enabled) const {
    if (ip_entries_.count(seg.src.addr) || ip_entries_.count(seg.dst.addr)) return Enforcement::drop;
    if (seg.proto != Proto::tcp) return Enforcement::pass;

    auto active = [&](const BlockEntry& e) { return dynamic_enabled || e.origin != BlockOrigin::scan; };

    if (seg.is_synack() && seg.direction == Direction::ingress) {
        if (auto* e = find(seg.src, BlockMode::synack_drop); e && active(*e)) return Enforcement::drop;
    }
    if (seg.is_syn()) {
        if (auto* e = find(seg.dst, BlockMode::rst_on_connect); e && active(*e)) return Enforcement::rst;
    }
    return Enforcement::pass;
}

RevalidationResult BlockTable::revalidate(const Tuple& tuple, SimTime cycle, bool probe_succeeded) {
    auto it = tuple_entries_.find({tuple, BlockMode::synack_drop});
    if (it == tuple_entries_.end() || it->second.origin != BlockOrigin::scan) return RevalidationResult::unknown;
    BlockEntry& e = it->second;
    e.last_check = cycle;
    if (probe_succeeded) {
        e.last_successful_revalidation = cycle;
        e.failure_streak_started.reset();
        return RevalidationResult::kept;
    }
    if (!e.failure_streak_started) {
        e.failure_streak_started = cycle;
        if (policy_.expiry_threshold > 0) return RevalidationResult::streak_started;
    }
    if (cycle - *e.failure_streak_started >= policy_.expiry_threshold) {
        tuple_entries_.erase(it);
        return RevalidationResult::removed;
    }
    return RevalidationResult::streak_continues;
}

std::vector<Tuple> BlockTable::due_for_revalidation(SimTime cycle) const {
    std::vector<Tuple> out;
    for (const auto& [key, e] : tuple_entries_) {
        if (e.origin == BlockOrigin::scan && e.mode == BlockMode::synack_drop &&
            cycle - e.last_check >= policy_.revalidation_period) {
            out.push_back(e.tuple);
        }
    }
    return out;
}

IngestResult BlockTable::ingest_consensus(std::span<const Tuple> relays, SimTime now, RngStream& rng) {
    IngestResult r;
    r.listed = relays.size();
    for (const auto& t : relays) {
        if (rng.bernoulli(policy_.consensus_miss_rate)) {
            ++r.missed;
            continue;
        }
        if (!find(t, BlockMode::synack_drop)) ++r.added;
        add(t, BlockMode::synack_drop, BlockOrigin::consensus, now);
    }
    return r;
}

}  // namespace gfcsim::blocktable
