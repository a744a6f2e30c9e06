#include "gfcsim/protocol/handshake.hpp"

#include <array>
#include <stdexcept>

namespace gfcsim::protocol {

namespace {

constexpr std::array<std::string_view, 9> kPhaseNames = {
    "closed",         "tcp-syn-sent",     "tcp-established", "hello-sent", "hello-received",
    "renegotiating",  "circuit-building", "tor-established", "failed",
};

std::vector<std::uint8_t> server_key(ByteView key) {
    std::vector<std::uint8_t> k(key.begin(), key.end());
    k.push_back('s');
    return k;
}

bool is_tor_message(const Record& r, TorMessage m) {
    return r.type == RecordType::application && !r.body.empty() && r.body[0] == static_cast<std::uint8_t>(m);
}

bool is_handshake(const Record& r, std::uint8_t kind) {
    return r.type == RecordType::handshake && !r.body.empty() && r.body[0] == kind;
}

}  // namespace

std::string_view to_string(Phase p) { return kPhaseNames[static_cast<std::size_t>(p)]; }

bool valid_phase_sequence(const std::vector<Phase>& history) {
    bool renegotiated = false;
    for (std::size_t i = 1; i < history.size(); ++i) {
        const auto prev = static_cast<int>(history[i - 1]);
        const auto next = static_cast<int>(history[i]);
        if (history[i - 1] == Phase::failed) return false;
        if (history[i] != Phase::failed && next != prev + 1) return false;
        if (history[i] == Phase::renegotiating) renegotiated = true;
        if (history[i] == Phase::tor_established && !renegotiated) return false;
    }
    return true;
}

HandshakeMachine::HandshakeMachine(HandshakeRole role, Transport transport, ByteView session_key) : role_(role) {
    state_.transport = transport;
    if (transport == Transport::obfuscated) {
        if (session_key.empty()) throw std::invalid_argument("obfuscated handshake needs a session key");
        const auto skey = server_key(session_key);
        if (role == HandshakeRole::bridge) {
            tx_.emplace(skey);
            rx_.emplace(session_key);
        } else {
            tx_.emplace(session_key);
            rx_.emplace(skey);
        }
    }
}

void HandshakeMachine::enter(Phase p) {
    state_.phase = p;
    state_.history.push_back(p);
}

void HandshakeMachine::fail() {
    if (state_.phase != Phase::failed) enter(Phase::failed);
}

void HandshakeMachine::on_connect_started() {
    if (state_.phase == Phase::closed) enter(Phase::tcp_syn_sent);
}

std::vector<std::uint8_t> HandshakeMachine::outbound(std::vector<std::uint8_t> plain) {
    state_.bytes_sent += plain.size();
    return tx_ ? tx_->apply(plain) : plain;
}

std::vector<std::uint8_t> HandshakeMachine::on_tcp_established() {
    if (state_.phase == Phase::closed) enter(Phase::tcp_syn_sent);
    if (state_.phase != Phase::tcp_syn_sent) return {};
    enter(Phase::tcp_established);
    if (role_ == HandshakeRole::bridge) return {};
    enter(Phase::hello_sent);
    return outbound(build_client_hello());
}

std::vector<std::uint8_t> HandshakeMachine::drive(ByteView inbound) {
    if (done()) return {};
    if (rx_) {
        auto plain = rx_->apply(inbound);
        reader_.feed(plain);
    } else {
        reader_.feed(inbound);
    }
    std::vector<std::uint8_t> out;
    while (auto rec = reader_.next()) {
        auto more = on_record(*rec);
        out.insert(out.end(), more.begin(), more.end());
        if (done()) break;
    }
    if (reader_.malformed()) fail();
    return out;
}

std::vector<std::uint8_t> HandshakeMachine::on_record(const Record& r) {
    if (role_ == HandshakeRole::bridge) {
        switch (state_.phase) {
            case Phase::tcp_established:
                if (!is_handshake(r, kHandshakeClientHello)) break;
                enter(Phase::hello_sent);
                enter(Phase::hello_received);
                return outbound(build_server_hello());
            case Phase::hello_received:
                if (!is_tor_message(r, TorMessage::renegotiate)) break;
                enter(Phase::renegotiating);
                return outbound(build_tor_message(TorMessage::renegotiated));
            case Phase::renegotiating: {
                if (!is_tor_message(r, TorMessage::create)) break;
                enter(Phase::circuit_building);
                auto reply = outbound(build_tor_message(TorMessage::created));
                enter(Phase::tor_established);
                return reply;
            }
            default: break;
        }
        fail();
        return {};
    }

    switch (state_.phase) {
        case Phase::hello_sent: {
            if (!is_handshake(r, kHandshakeServerHello)) break;
            enter(Phase::hello_received);
            enter(Phase::renegotiating);
            return outbound(build_tor_message(TorMessage::renegotiate));
        }
        case Phase::renegotiating:
            if (!is_tor_message(r, TorMessage::renegotiated)) break;
            enter(Phase::circuit_building);
            return outbound(build_tor_message(TorMessage::create));
        case Phase::circuit_building:
            if (!is_tor_message(r, TorMessage::created)) break;
            enter(Phase::tor_established);
            return {};
        default: break;
    }
    fail();
    return {};
}

}  // namespace gfcsim::protocol
