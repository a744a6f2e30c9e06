#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "gfcsim/evasion/guard.hpp"
#include "gfcsim/evasion/spa.hpp"
#include "gfcsim/protocol/handshake.hpp"
#include "gfcsim/scenario/scenario.hpp"
#include "gfcsim/sim/context.hpp"
#include "gfcsim/simnet/tcp.hpp"

namespace gfcsim::sim {

/// An endpoint: TCP stack, ICMP echo, the configured services, and any
/// bridge-side protections (guard, SPA, whitelist, offline windows).
class Host : public SegmentSink {
public:
    using ReplyFn = std::function<void(const Segment&)>;
    /// Initial ttl for an echo reply from `local`, or nullopt to stay silent.
    using PingResponder = std::function<std::optional<std::uint8_t>(Address local, SimTime now)>;

    struct Stats {
        std::uint64_t guard_drops = 0;
        std::uint64_t spa_drops = 0;
        std::uint64_t whitelist_drops = 0;
        std::uint64_t offline_drops = 0;
        std::uint64_t liveness_probes = 0;
    };

    Host(SimContext& ctx, HostId id, scenario::HostSpec spec);
    Host(const Host&) = delete;
    Host& operator=(const Host&) = delete;

    void receive(const Segment& seg) override;
    /// Outbound path: applies window rewriting, then hands to the network.
    void transmit(Segment seg);

    void add_service(const scenario::ServiceSpec& s);
    void set_ping_responder(PingResponder r) { responder_ = std::move(r); }

    std::uint32_t ping(Address from, Address to, ReplyFn on_reply);
    void forget_ping(std::uint32_t id) { pings_.erase(id); }
    void send_datagram(const Tuple& from, const Tuple& to, Bytes payload);
    std::uint16_t next_port(Address local, const Tuple& remote);

    bool online(SimTime t) const { return !any_contains(spec_.offline, t); }
    HostId id() const { return id_; }
    const std::string& name() const { return spec_.name; }
    Region region() const { return spec_.region; }
    /// First configured address.
    Address address() const;
    const scenario::HostSpec& spec() const { return spec_; }
    TcpStack& tcp() { return tcp_; }
    SimContext& ctx() { return ctx_; }
    const Stats& stats() const { return stats_; }

private:
    struct Session {
        scenario::ServiceKind kind;
        Tuple remote;
        std::unique_ptr<protocol::HandshakeMachine> hs;
    };

    bool admit(const Segment& seg, SimTime now);
    TcpCallbacks accept(const scenario::ServiceSpec& svc, ConnId id);
    void on_service_data(ConnId id, std::span<const std::uint8_t> data);
    void start_liveness_probe(Address target, std::uint8_t scan_ttl);

    SimContext& ctx_;
    HostId id_;
    scenario::HostSpec spec_;
    TcpStack tcp_;
    std::optional<evasion::SynGuard> guard_;
    std::optional<evasion::SpaGate> spa_;
    std::set<std::uint16_t> served_;
    std::map<ConnId, Session> sessions_;
    std::map<Tuple, std::uint8_t> syn_ttl_;
    std::map<std::uint32_t, ReplyFn> pings_;
    PingResponder responder_;
    std::uint32_t next_ping_ = 1;
    std::uint16_t next_port_ = 20000;
    Stats stats_;
};

/// Common attributes for records about a connection from `host`.
Attributes connection_attrs(const Host& host, const std::string& label, const Tuple& target);

}  // namespace gfcsim::sim
