#include "gfcsim/simnet/segment.hpp"

namespace gfcsim {

std::string flags_string(std::uint8_t flags) {
    std::string out;
    auto add = [&](std::uint8_t f, const char* name) {
        if (!(flags & f)) return;
        if (!out.empty()) out += '|';
        out += name;
    };
    add(tcpflag::SYN, "SYN");
    add(tcpflag::ACK, "ACK");
    add(tcpflag::RST, "RST");
    add(tcpflag::FIN, "FIN");
    return out.empty() ? "-" : out;
}

std::string_view to_string(Proto p) {
    switch (p) {
        case Proto::tcp: return "tcp";
        case Proto::udp: return "udp";
        case Proto::icmp_echo: return "icmp-echo";
        case Proto::icmp_echo_reply: return "icmp-echo-reply";
    }
    return "?";
}

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::egress: return "egress";
        case Direction::ingress: return "ingress";
        case Direction::domestic: return "domestic";
    }
    return "?";
}

}  // namespace gfcsim
