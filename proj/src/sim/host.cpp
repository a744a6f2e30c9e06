#include "gfcsim/sim/host.hpp"

#include <algorithm>
#include <stdexcept>

#include "gfcsim/protocol/http.hpp"

namespace gfcsim::sim {
namespace {

constexpr int kProbePings = 16;
constexpr Seconds kProbeSpacing = 60;

bool listed(const std::vector<Address>& allow, Address a) {
    return std::find(allow.begin(), allow.end(), a) != allow.end();
}

}  // namespace

Attributes connection_attrs(const Host& host, const std::string& label, const Tuple& target) {
    return {{"client", label},
            {"host", host.name()},
            {"region", std::string(to_string(host.region()))},
            {"target", target.str()}};
}

Host::Host(SimContext& ctx, HostId id, scenario::HostSpec spec)
    : ctx_(ctx), id_(id), spec_(std::move(spec)), tcp_(ctx.sched, spec_.tcp, [this](Segment s) { transmit(std::move(s)); }) {
    if (spec_.guard) guard_.emplace(*spec_.guard);
    if (spec_.spa) spa_.emplace(*spec_.spa);
    for (const auto& s : spec_.services) add_service(s);
}

Address Host::address() const {
    if (spec_.addresses.empty()) throw std::logic_error("host " + spec_.name + " has no address");
    return spec_.addresses.front();
}

void Host::add_service(const scenario::ServiceSpec& s) {
    if (served_.count(s.port)) return;
    served_.insert(s.port);
    tcp_.listen(s.port, [this, s](ConnId id) { return accept(s, id); });
}

std::uint16_t Host::next_port(Address local, const Tuple& remote) {
    for (int tries = 0; tries < 65536; ++tries) {
        const std::uint16_t p = next_port_;
        next_port_ = next_port_ == 65535 ? 20000 : static_cast<std::uint16_t>(next_port_ + 1);
        if (!served_.count(p) && !tcp_.has_connection(Tuple{local, p}, remote)) return p;
    }
    throw SimulationError("host " + spec_.name + " ran out of ephemeral ports");
}

void Host::transmit(Segment seg) {
    if (!online(ctx_.now())) return;
    if (guard_ && guard_->policy().synack_window_override && seg.proto == Proto::tcp && served_.count(seg.src.port)) {
        if (seg.is_synack()) seg = evasion::rewrite_synack_window(seg, guard_->policy());
        else seg.window = *guard_->policy().synack_window_override;
    }
    ctx_.net.send(id_, std::move(seg));
}

bool Host::admit(const Segment& seg, SimTime now) {
    if (!online(now)) {
        ++stats_.offline_drops;
        return false;
    }
    if (spec_.whitelist && now >= spec_.whitelist->from && !listed(spec_.whitelist->allow, seg.src.addr)) {
        ++stats_.whitelist_drops;
        return false;
    }
    if (spa_ && seg.proto != Proto::udp && !spa_->allowed(seg.src.addr, now)) {
        ++stats_.spa_drops;
        return false;
    }
    return true;
}

void Host::receive(const Segment& seg) {
    const SimTime now = ctx_.now();
    if (!admit(seg, now)) return;

    switch (seg.proto) {
        case Proto::icmp_echo: {
            std::optional<std::uint8_t> ttl = spec_.tcp.initial_ttl;
            if (responder_) ttl = responder_(seg.dst.addr, now);
            if (!ttl) return;
            Segment reply;
            reply.proto = Proto::icmp_echo_reply;
            reply.src = seg.dst;
            reply.dst = seg.src;
            reply.seq = seg.seq;
            reply.ttl = *ttl;
            transmit(std::move(reply));
            return;
        }
        case Proto::icmp_echo_reply: {
            auto it = pings_.find(seg.seq);
            if (it == pings_.end()) return;
            auto fn = std::move(it->second);
            pings_.erase(it);
            if (fn) fn(seg);
            return;
        }
        case Proto::udp:
            if (spa_) spa_->on_datagram(seg.src.addr, seg.payload, now);
            return;
        case Proto::tcp: break;
    }

    if (seg.is_syn() && tcp_.listening(seg.dst.port) && !tcp_.has_connection(seg.dst, seg.src)) {
        if (guard_ && guard_->filter_syn(seg, now) == evasion::GuardDecision::silent_drop) {
            ++stats_.guard_drops;
            return;
        }
        if (spec_.observe_scanners) syn_ttl_[seg.src] = seg.ttl;
    }
    if (!tcp_.receive(seg) && !seg.has(tcpflag::RST)) {
        Segment rst;
        rst.proto = Proto::tcp;
        rst.src = seg.dst;
        rst.dst = seg.src;
        rst.flags = tcpflag::RST | tcpflag::ACK;
        rst.seq = seg.ack;
        rst.ack = seg.seq + static_cast<std::uint32_t>(seg.payload.size());
        rst.ttl = spec_.tcp.initial_ttl;
        transmit(std::move(rst));
    }
}

TcpCallbacks Host::accept(const scenario::ServiceSpec& svc, ConnId id) {
    auto ep = tcp_.endpoints(id);
    Session s{svc.kind, ep ? ep->second : Tuple{}, nullptr};
    if (svc.kind == scenario::ServiceKind::tor_bridge || svc.kind == scenario::ServiceKind::tor_relay) {
        s.hs = std::make_unique<protocol::HandshakeMachine>(protocol::HandshakeRole::bridge, svc.transport,
                                                             protocol::to_bytes(svc.session_key));
        s.hs->on_connect_started();
    }
    sessions_[id] = std::move(s);

    TcpCallbacks cb;
    cb.on_established = [this](ConnId cid) {
        auto it = sessions_.find(cid);
        if (it == sessions_.end()) return;
        const Tuple remote = it->second.remote;
        if (it->second.hs) it->second.hs->on_tcp_established();
        if (guard_) guard_->on_established(remote);
        if (spec_.observe_scanners) {
            auto t = syn_ttl_.find(remote);
            if (t != syn_ttl_.end()) {
                const auto ttl = t->second;
                syn_ttl_.erase(t);
                start_liveness_probe(remote.addr, ttl);
            }
        }
    };
    cb.on_data = [this](ConnId cid, std::span<const std::uint8_t> data) { on_service_data(cid, data); };
    cb.on_failed = [this](ConnId cid, std::string_view) {
        if (auto it = sessions_.find(cid); it != sessions_.end()) {
            syn_ttl_.erase(it->second.remote);
            sessions_.erase(it);
        }
    };
    cb.on_closed = [this](ConnId cid) { sessions_.erase(cid); };
    return cb;
}

void Host::on_service_data(ConnId id, std::span<const std::uint8_t> data) {
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return;
    auto& s = it->second;
    switch (s.kind) {
        case scenario::ServiceKind::tor_bridge:
        case scenario::ServiceKind::tor_relay: {
            auto out = s.hs->drive(data);
            const bool failed = s.hs->phase() == protocol::Phase::failed;
            if (!out.empty()) tcp_.send(id, out);
            if (failed) tcp_.close(id);
            return;
        }
        case scenario::ServiceKind::http:
        case scenario::ServiceKind::dir_authority: {
            const bool request = protocol::starts_with(data, "GET ") || protocol::starts_with(data, "POST ") ||
                                 protocol::starts_with(data, "HEAD ");
            auto out = request ? protocol::build_http_response(200, "OK")
                               : protocol::build_http_response(400, "Bad Request");
            tcp_.send(id, out);
            tcp_.close(id);
            return;
        }
        case scenario::ServiceKind::https: tcp_.send(id, protocol::build_server_hello()); return;
        case scenario::ServiceKind::echo: tcp_.send(id, data); return;
    }
}

std::uint32_t Host::ping(Address from, Address to, ReplyFn on_reply) {
    const std::uint32_t id = next_ping_++;
    pings_[id] = std::move(on_reply);
    Segment s;
    s.proto = Proto::icmp_echo;
    s.src = Tuple{from, 0};
    s.dst = Tuple{to, 0};
    s.seq = id;
    s.ttl = spec_.tcp.initial_ttl;
    transmit(std::move(s));
    return id;
}

void Host::send_datagram(const Tuple& from, const Tuple& to, Bytes payload) {
    Segment s;
    s.proto = Proto::udp;
    s.src = from;
    s.dst = to;
    s.ttl = spec_.tcp.initial_ttl;
    s.payload = std::move(payload);
    transmit(std::move(s));
}

void Host::start_liveness_probe(Address target, std::uint8_t scan_ttl) {
    struct Probe {
        Address target;
        std::uint8_t scan_ttl;
        SimTime started;
        bool done = false;
        std::vector<std::uint32_t> pings;
    };
    ++stats_.liveness_probes;
    auto p = std::make_shared<Probe>(Probe{target, scan_ttl, ctx_.now(), false, {}});
    auto base = [this, p] {
        Attributes a{{"host", spec_.name},
                     {"layer", "icmp"},
                     {"probe", "scanner-liveness"},
                     {"region", std::string(to_string(spec_.region))},
                     {"scan-ttl", std::to_string(p->scan_ttl)},
                     {"target", p->target.str()}};
        return a;
    };
    for (int k = 1; k <= kProbePings; ++k) {
        ctx_.sched.schedule_in(kProbeSpacing * k, [this, p, k, base] {
            if (p->done) return;
            p->pings.push_back(ping(address(), p->target, [this, p, k, base](const Segment& reply) {
                if (p->done) return;
                p->done = true;
                auto a = base();
                a["minutes"] = std::to_string(k);
                a["reply-ttl"] = std::to_string(reply.ttl);
                a["ttl-delta"] = std::to_string(int{reply.ttl} - int{p->scan_ttl});
                ctx_.log.emit(ctx_.now(), EventKind::connection_established, std::move(a));
            }));
        });
    }
    ctx_.sched.schedule_in(kProbeSpacing * (kProbePings + 1), [this, p, base] {
        for (auto id : p->pings) forget_ping(id);
        if (p->done) return;
        p->done = true;
        auto a = base();
        a["reason"] = "no-reply";
        ctx_.log.emit(ctx_.now(), EventKind::connection_failed, std::move(a));
    });
}

}  // namespace gfcsim::sim
