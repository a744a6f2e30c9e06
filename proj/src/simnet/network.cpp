#include "gfcsim/simnet/network.hpp"

namespace gfcsim {

void Network::attach(HostId host, SegmentSink* sink) {
    if (sinks_.size() <= host) sinks_.resize(host + 1, nullptr);
    sinks_[host] = sink;
}

Attributes Network::describe(const Segment& seg) {
    Attributes a;
    a["id"] = std::to_string(seg.id);
    a["proto"] = std::string(to_string(seg.proto));
    a["src"] = seg.src.str();
    a["dst"] = seg.dst.str();
    a["dir"] = std::string(to_string(seg.direction));
    a["ttl"] = std::to_string(seg.ttl);
    a["len"] = std::to_string(seg.payload.size());
    if (seg.proto == Proto::tcp) {
        a["flags"] = flags_string(seg.flags);
        a["seq"] = std::to_string(seg.seq);
        a["ack"] = std::to_string(seg.ack);
        a["win"] = std::to_string(seg.window);
    }
    if (seg.injected) a["injected"] = "1";
    return a;
}

void Network::drop(const Segment& seg, const char* reason) {
    if (!log_segments_) return;
    Attributes a{{"id", std::to_string(seg.id)}, {"reason", reason}};
    log_.emit(sched_.now(), EventKind::segment_dropped, std::move(a));
}

void Network::deliver_at(Seconds delay, HostId to, Segment seg) {
    sched_.schedule_in(delay, [this, to, seg = std::move(seg)]() {
        if (log_segments_) {
            auto a = describe(seg);
            a["host"] = topo_.host(to).name;
            log_.emit(sched_.now(), EventKind::segment_delivered, std::move(a));
        }
        if (to < sinks_.size() && sinks_[to]) sinks_[to]->receive(seg);
    });
}

void Network::send(HostId from, Segment seg) {
    seg.id = next_id_++;
    ++sent_;
    const auto to = topo_.owner(seg.dst.addr);
    if (to) seg.direction = direction_between(topo_.host(from).region, topo_.host(*to).region);
    if (log_segments_) {
        auto a = describe(seg);
        a["host"] = topo_.host(from).name;
        log_.emit(sched_.now(), EventKind::segment_sent, std::move(a));
    }
    const Path* path = to ? topo_.path(from, *to) : nullptr;
    if (!path) {
        drop(seg, "no-route");
        return;
    }

    Seconds elapsed = 0;
    int hops = 0;
    for (auto li : path->links) {
        const Link& link = topo_.link(li);
        if (link.gfc && inspector_) {
            BorderContext ctx{link, from, *to, elapsed, path->delay - elapsed, hops, path->hops - hops};
            if (inspector_->on_border(seg, ctx) == BorderAction::drop) {
                drop(seg, "enforcement");
                return;
            }
        }
        if (link.loss > 0 && rng_.stream(RngStreams::kLoss).bernoulli(link.loss)) {
            drop(seg, "loss");
            return;
        }
        elapsed += link.delay;
        hops += link.hop_count;
    }
    if (path->hops >= seg.ttl) {
        drop(seg, "expired");
        return;
    }
    seg.ttl = static_cast<std::uint8_t>(seg.ttl - path->hops);
    deliver_at(path->delay, *to, std::move(seg));
}

void Network::inject(Segment seg, HostId to, Seconds delay, int hops) {
    seg.id = next_id_++;
    seg.injected = true;
    auto a = describe(seg);
    a["to"] = topo_.host(to).name;
    log_.emit(sched_.now(), EventKind::rst_injected, std::move(a));
    seg.ttl = static_cast<std::uint8_t>(seg.ttl > hops ? seg.ttl - hops : 1);
    deliver_at(delay, to, std::move(seg));
}

}  // namespace gfcsim
