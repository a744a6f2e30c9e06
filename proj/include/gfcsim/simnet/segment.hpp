#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfcsim/simnet/address.hpp"

namespace gfcsim {

using Bytes = std::vector<std::uint8_t>;

enum class Proto : std::uint8_t { tcp, udp, icmp_echo, icmp_echo_reply };

enum class Direction : std::uint8_t { egress, ingress, domestic };

namespace tcpflag {
inline constexpr std::uint8_t SYN = 0x01;
inline constexpr std::uint8_t ACK = 0x02;
inline constexpr std::uint8_t RST = 0x04;
inline constexpr std::uint8_t FIN = 0x08;
}  // namespace tcpflag

struct Segment {
    std::uint64_t id = 0;
    Proto proto = Proto::tcp;
    Tuple src;
    Tuple dst;
    std::uint8_t flags = 0;
    std::uint32_t seq = 0;  // byte offset of payload[0] in the sender's stream
    std::uint32_t ack = 0;  // next byte expected from the peer
    std::uint16_t window = 0;
    std::uint8_t ttl = 64;  // initial ttl when sent, observed ttl once delivered
    Bytes payload;
    Direction direction = Direction::domestic;
    bool injected = false;

    bool has(std::uint8_t f) const { return (flags & f) == f; }
    /// A connection-opening SYN (no ACK).
    bool is_syn() const { return proto == Proto::tcp && (flags & (tcpflag::SYN | tcpflag::ACK)) == tcpflag::SYN; }
    bool is_synack() const { return proto == Proto::tcp && has(tcpflag::SYN | tcpflag::ACK); }
};

std::string flags_string(std::uint8_t flags);
std::string_view to_string(Proto p);
std::string_view to_string(Direction d);

}  // namespace gfcsim
