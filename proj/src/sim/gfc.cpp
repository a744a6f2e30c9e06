#include "gfcsim/sim/gfc.hpp"

namespace gfcsim::sim {

BorderAction Gfc::on_border(const Segment& seg, const BorderContext& where) {
    if (exempt_ && (exempt_(seg.src.addr) || exempt_(seg.dst.addr))) return BorderAction::pass;
    const SimTime now = ctx_.now();

    switch (table_.enforce(seg, cfg_.enabled_at(now))) {
        case blocktable::Enforcement::drop: ++stats_.enforcement_drops; return BorderAction::drop;
        case blocktable::Enforcement::rst: {
            ++stats_.connect_resets;
            auto rst = dpi::make_rst_pair(seg).first;
            ctx_.net.inject(std::move(rst), where.src_host, where.delay_to_src, where.hops_to_src);
            return BorderAction::pass;
        }
        case blocktable::Enforcement::pass: break;
    }

    ++stats_.inspected;
    const auto verdict = dpi::inspect(seg, cfg_, now);
    switch (verdict.kind) {
        case dpi::VerdictKind::report_tor:
            ++stats_.reports;
            dpi::report_tor(sink_, verdict.target, now);
            break;
        case dpi::VerdictKind::inject_rst: {
            ++stats_.http_resets;
            auto [to_sender, to_receiver] = dpi::make_rst_pair(seg);
            ctx_.net.inject(std::move(to_sender), where.src_host, where.delay_to_src, where.hops_to_src);
            ctx_.net.inject(std::move(to_receiver), where.dst_host, where.delay_to_dst, where.hops_to_dst);
            break;
        }
        case dpi::VerdictKind::drop: return BorderAction::drop;
        case dpi::VerdictKind::pass: break;
    }
    return BorderAction::pass;
}

}  // namespace gfcsim::sim
