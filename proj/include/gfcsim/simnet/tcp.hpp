#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "gfcsim/simnet/scheduler.hpp"
#include "gfcsim/simnet/segment.hpp"

namespace gfcsim {

struct TcpParams {
    std::uint8_t initial_ttl = 64;
    std::uint16_t mss = 1460;
    std::uint16_t window = 65535;
    int syn_retries = 5;
    int data_retries = 5;
    Seconds rto_base = 1;
    int backoff_multiplier = 2;
};

using ConnId = std::uint64_t;

enum class TcpState : std::uint8_t { syn_sent, syn_received, established, closed, failed };

struct TcpCallbacks {
    std::function<void(ConnId)> on_established;
    std::function<void(ConnId, std::span<const std::uint8_t>)> on_data;
    std::function<void(ConnId, std::string_view reason)> on_failed;
    std::function<void(ConnId)> on_closed;
};

/// Per-connection overrides of the host defaults.
struct ConnectOptions {
    std::optional<int> syn_retries;
    std::optional<Seconds> rto_base;
    std::optional<int> backoff_multiplier;
    /// Caps outbound payload per segment below the host MSS (client-side fragmentation).
    std::optional<std::uint16_t> mss_override;
};

/// Simplified TCP: 3-way handshake, cumulative byte acks, in-order receive
/// only, go-back-N retransmission with exponential backoff, and senders that
/// never exceed the peer's advertised window. SYN and FIN consume no sequence
/// space.
class TcpStack {
public:
    using SendFn = std::function<void(Segment)>;
    using AcceptFn = std::function<TcpCallbacks(ConnId)>;

    TcpStack(Scheduler& sched, TcpParams params, SendFn send)
        : sched_(sched), params_(params), send_(std::move(send)) {}

    ConnId connect(Tuple local, Tuple remote, TcpCallbacks cb, ConnectOptions opts = {});
    void listen(std::uint16_t port, AcceptFn accept) { listeners_[port] = std::move(accept); }
    void unlisten(std::uint16_t port) { listeners_.erase(port); }
    bool listening(std::uint16_t port) const { return listeners_.count(port) != 0; }

    void send(ConnId id, std::span<const std::uint8_t> bytes);
    /// Sends FIN once queued data is acknowledged.
    void close(ConnId id);
    /// Forgets the connection without telling the peer.
    void abort(ConnId id);

    /// Returns false when no connection or listener wanted the segment.
    bool receive(const Segment& seg);

    bool has_connection(const Tuple& local, const Tuple& remote) const;
    std::optional<TcpState> state(ConnId id) const;
    std::optional<std::pair<Tuple, Tuple>> endpoints(ConnId id) const;
    std::size_t connection_count() const { return conns_.size(); }
    const TcpParams& params() const { return params_; }

    /// Half-open passive connections are discarded after this long.
    static constexpr Seconds kSynReceivedTimeout = 75;

private:
    struct Conn {
        ConnId id = 0;
        Tuple local, remote;
        TcpState state = TcpState::syn_sent;
        TcpCallbacks cb;
        int syn_retries = 0;
        int retries_left = 0;
        Seconds rto = 1;
        int multiplier = 2;
        std::uint16_t mss = 1460;
        EventHandle timer = 0;
        bool timer_armed = false;
        Bytes stream;  // everything ever written, indexed by sequence number
        std::uint32_t snd_una = 0;
        std::uint32_t snd_nxt = 0;
        std::uint16_t peer_window = 0;
        bool fin_pending = false;
        std::uint32_t rcv_nxt = 0;
    };

    Conn* find(ConnId id);
    const Conn* find(ConnId id) const;
    void emit(const Conn& c, std::uint8_t flags, std::uint32_t seq, Bytes payload = {});
    void arm(Conn& c);
    void disarm(Conn& c);
    void on_timer(ConnId id);
    void pump(Conn& c);
    void fail(ConnId id, std::string_view reason);
    void remove(ConnId id);
    void handle(Conn& c, const Segment& seg);

    Scheduler& sched_;
    TcpParams params_;
    SendFn send_;
    std::map<std::uint16_t, AcceptFn> listeners_;
    std::map<ConnId, std::unique_ptr<Conn>> conns_;
    std::map<std::pair<Tuple, Tuple>, ConnId> by_key_;
    ConnId next_id_ = 1;
};

}  // namespace gfcsim
