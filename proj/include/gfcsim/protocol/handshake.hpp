#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gfcsim/protocol/obfuscation.hpp"
#include "gfcsim/protocol/tls.hpp"

namespace gfcsim::protocol {

/// Ordered; a connection only ever moves forward through these, or to failed.
enum class Phase : std::uint8_t {
    closed,
    tcp_syn_sent,
    tcp_established,
    hello_sent,
    hello_received,
    renegotiating,
    circuit_building,
    tor_established,
    failed,
};

std::string_view to_string(Phase p);

enum class HandshakeRole : std::uint8_t { client, scanner_client, bridge };

struct HandshakeState {
    Phase phase = Phase::closed;
    std::uint64_t bytes_sent = 0;
    Transport transport = Transport::plain_tor;
    std::vector<Phase> history{Phase::closed};
};

/// True when `history` only moves forward one phase at a time, except for
/// closed->failed and any->failed, and tor_established is preceded by
/// renegotiating.
bool valid_phase_sequence(const std::vector<Phase>& history);

/// Tor handshake shape: client hello, server hello, renegotiation, circuit
/// build. Reaching tor_established is the "speaks Tor" predicate used by
/// scanners.
class HandshakeMachine {
public:
    /// `session_key` is required for the obfuscated transport.
    HandshakeMachine(HandshakeRole role, Transport transport, ByteView session_key = {});

    void on_connect_started();
    /// Client roles return their hello; the bridge returns nothing.
    std::vector<std::uint8_t> on_tcp_established();
    /// Feeds bytes from the peer and returns bytes to send back (possibly
    /// none). Malformed input moves the machine to failed.
    std::vector<std::uint8_t> drive(ByteView inbound);
    void fail();

    const HandshakeState& state() const { return state_; }
    Phase phase() const { return state_.phase; }
    bool done() const { return state_.phase == Phase::tor_established || state_.phase == Phase::failed; }
    HandshakeRole role() const { return role_; }

private:
    void enter(Phase p);
    std::vector<std::uint8_t> outbound(std::vector<std::uint8_t> plain);
    std::vector<std::uint8_t> on_record(const Record& r);

    HandshakeRole role_;
    HandshakeState state_;
    RecordReader reader_;
    std::optional<ObfuscationStream> tx_;
    std::optional<ObfuscationStream> rx_;
};

}  // namespace gfcsim::protocol
