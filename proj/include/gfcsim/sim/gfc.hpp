#pragma once

#include <cstdint>
#include <functional>

#include "gfcsim/blocktable/block_table.hpp"
#include "gfcsim/dpi/dpi.hpp"
#include "gfcsim/sim/context.hpp"

namespace gfcsim::sim {

/// The border middlebox: block-table enforcement first, then DPI. Traffic of
/// the censor's own scanners is neither inspected nor filtered.
class Gfc : public BorderInspector {
public:
    struct Stats {
        std::uint64_t inspected = 0;
        std::uint64_t reports = 0;
        std::uint64_t http_resets = 0;
        std::uint64_t connect_resets = 0;
        std::uint64_t enforcement_drops = 0;
    };

    Gfc(SimContext& ctx, const dpi::DpiConfig& cfg, blocktable::BlockTable& table, dpi::DetectionSink& sink)
        : ctx_(ctx), cfg_(cfg), table_(table), sink_(sink) {}

    void set_exemption(std::function<bool(Address)> exempt) { exempt_ = std::move(exempt); }

    BorderAction on_border(const Segment& seg, const BorderContext& where) override;

    const Stats& stats() const { return stats_; }

private:
    SimContext& ctx_;
    const dpi::DpiConfig& cfg_;
    blocktable::BlockTable& table_;
    dpi::DetectionSink& sink_;
    std::function<bool(Address)> exempt_;
    Stats stats_;
};

}  // namespace gfcsim::sim
