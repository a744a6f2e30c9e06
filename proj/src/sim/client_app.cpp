#include "gfcsim/sim/client_app.hpp"

#include <algorithm>

#include "gfcsim/evasion/spa.hpp"
#include "gfcsim/protocol/http.hpp"
#include "gfcsim/protocol/tls.hpp"

namespace gfcsim::sim {

using protocol::Transport;
using scenario::ClientKind;

namespace {
constexpr Seconds kPingTimeout = 10;
}

Bytes build_http_probe(const scenario::HttpOptions& opts) {
    Bytes agent;
    if (opts.user_agent_hello) agent = protocol::build_client_hello();
    auto bytes = protocol::serialize_http(protocol::make_get(opts.host_header, agent, opts.path));
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(opts.zero_prefix), bytes.size());
    std::fill_n(bytes.begin(), n, std::uint8_t{0});
    return bytes;
}

ClientApp::ClientApp(Host& host, scenario::ClientSpec spec) : host_(host), spec_(std::move(spec)) {}

void ClientApp::start(SimTime end) {
    if (spec_.start >= end) return;
    host_.ctx().sched.schedule(spec_.start, [this, end] { round(0, end); });
}

void ClientApp::round(std::int64_t n, SimTime end) {
    for (const auto& t : spec_.targets) {
        if (spec_.kind == ClientKind::ping) launch_ping(t, n);
        else launch(t, n);
    }
    if (spec_.count != 0 && n + 1 >= spec_.count) return;
    Seconds gap = spec_.interval;
    if (spec_.random_interval()) {
        gap = host_.ctx().rng.stream(RngStreams::kClientBehavior).uniform_int(spec_.interval_min, spec_.interval_max);
    }
    const SimTime next = host_.ctx().now() + gap;
    if (next >= end) return;
    host_.ctx().sched.schedule(next, [this, n, end] { round(n + 1, end); });
}

ClientApp::Attempt* ClientApp::find(std::uint64_t id) {
    auto it = live_.find(id);
    return it == live_.end() ? nullptr : it->second.get();
}

Attributes ClientApp::attrs(const Attempt& a) const {
    auto out = connection_attrs(host_, spec_.label, a.target);
    out["attempt"] = std::to_string(a.id);
    out["kind"] = to_string(spec_.kind);
    out["round"] = std::to_string(a.round);
    if (spec_.kind == ClientKind::tor) out["transport"] = std::string(protocol::to_string(spec_.transport));
    return out;
}

void ClientApp::succeed(Attempt& a, const char* layer) {
    auto r = attrs(a);
    r["layer"] = layer;
    host_.ctx().log.emit(host_.ctx().now(), EventKind::connection_established, std::move(r));
}

void ClientApp::fail(Attempt& a, std::string_view reason) {
    if (a.done) return;
    a.done = true;
    auto r = attrs(a);
    r["layer"] = spec_.kind == ClientKind::ping ? "icmp" : (a.tcp_up ? "app" : "tcp");
    r["reason"] = std::string(reason);
    if (a.hs) r["phase"] = std::string(protocol::to_string(a.hs->phase()));
    host_.ctx().log.emit(host_.ctx().now(), EventKind::connection_failed, std::move(r));
    if (spec_.kind != ClientKind::ping && host_.tcp().state(a.conn)) host_.tcp().abort(a.conn);
    live_.erase(a.id);
}

void ClientApp::launch_ping(const Tuple& target, std::int64_t round) {
    auto a = std::make_unique<Attempt>();
    a->id = next_id_++;
    a->target = target;
    a->round = round;
    a->local = Tuple{host_.address(), 0};
    const auto id = a->id;
    live_[id] = std::move(a);
    ++attempts_started_;
    const auto echo = host_.ping(host_.address(), target.addr, [this, id](const Segment&) {
        auto* at = find(id);
        if (!at || at->done) return;
        at->done = true;
        succeed(*at, "icmp");
        live_.erase(id);
    });
    host_.ctx().sched.schedule_in(kPingTimeout, [this, id, echo] {
        host_.forget_ping(echo);
        if (auto* at = find(id)) fail(*at, "timeout");
    });
}

Bytes ClientApp::first_payload(Attempt& a) {
    switch (spec_.kind) {
        case ClientKind::tor: return a.hs->on_tcp_established();
        case ClientKind::http: return build_http_probe(spec_.http);
        case ClientKind::https: return protocol::build_browser_hello();
        case ClientKind::tcp_probe:
        case ClientKind::ping: return {};
    }
    return {};
}

void ClientApp::launch(const Tuple& target, std::int64_t round) {
    auto a = std::make_unique<Attempt>();
    a->id = next_id_++;
    a->target = target;
    a->round = round;
    const Address local_addr = host_.address();
    a->local = Tuple{local_addr, host_.next_port(local_addr, target)};
    if (spec_.kind == ClientKind::tor) {
        const auto t = spec_.transport == Transport::obfuscated ? Transport::obfuscated : Transport::plain_tor;
        a->hs = std::make_unique<protocol::HandshakeMachine>(protocol::HandshakeRole::client, t,
                                                             protocol::to_bytes(spec_.session_key));
        a->hs->on_connect_started();
        if (spec_.transport == Transport::spa_guarded) {
            host_.send_datagram(a->local, target,
                                evasion::make_spa_token(protocol::to_bytes(spec_.spa_secret), host_.ctx().now()));
        }
    }
    const auto id = a->id;
    const Tuple local = a->local;
    auto* raw = a.get();
    live_[id] = std::move(a);
    ++attempts_started_;

    ConnectOptions opts;
    if (spec_.fragment_mss) opts.mss_override = spec_.fragment_mss;
    else if (host_.spec().fragment) opts.mss_override = host_.spec().fragment->mss_override;

    TcpCallbacks cb;
    cb.on_established = [this, id](ConnId) { on_established(id); };
    cb.on_data = [this, id](ConnId, std::span<const std::uint8_t> d) { on_data(id, d); };
    cb.on_failed = [this, id](ConnId, std::string_view reason) {
        if (auto* at = find(id)) fail(*at, reason);
    };
    cb.on_closed = [this, id](ConnId) {
        if (auto* at = find(id)) fail(*at, "closed");
    };
    raw->conn = host_.tcp().connect(local, target, std::move(cb), opts);
}

void ClientApp::on_established(std::uint64_t id) {
    auto* a = find(id);
    if (!a) return;
    a->tcp_up = true;
    succeed(*a, "tcp");
    if (spec_.kind == ClientKind::tcp_probe) {
        a->done = true;
        host_.tcp().close(a->conn);
        live_.erase(id);
        return;
    }
    auto out = first_payload(*a);
    if (!out.empty()) host_.tcp().send(a->conn, out);
    host_.ctx().sched.schedule_in(spec_.app_timeout, [this, id] {
        if (auto* at = find(id)) fail(*at, "app-timeout");
    });
}

void ClientApp::on_data(std::uint64_t id, std::span<const std::uint8_t> data) {
    auto* a = find(id);
    if (!a || a->done) return;
    bool ok = false;
    switch (spec_.kind) {
        case ClientKind::tor: {
            auto out = a->hs->drive(data);
            if (!out.empty()) host_.tcp().send(a->conn, out);
            if (a->hs->phase() == protocol::Phase::failed) {
                fail(*a, "handshake");
                return;
            }
            ok = a->hs->phase() == protocol::Phase::tor_established;
            break;
        }
        case ClientKind::http: ok = protocol::is_http_response(data); break;
        case ClientKind::https: ok = !data.empty(); break;
        case ClientKind::tcp_probe:
        case ClientKind::ping: break;
    }
    if (!ok) return;
    a->done = true;
    succeed(*a, "app");
    host_.tcp().close(a->conn);
    live_.erase(id);
}

}  // namespace gfcsim::sim
