#include "gfcsim/dpi/dpi.hpp"

#include "gfcsim/protocol/bytes.hpp"
#include "gfcsim/protocol/cipher_list.hpp"
#include "gfcsim/protocol/http.hpp"

namespace gfcsim::dpi {

bool starts_with_http_method(const Bytes& payload, const DpiConfig& cfg) {
    for (const auto& token : cfg.http_method_tokens) {
        if (protocol::starts_with(payload, token)) return true;
    }
    return false;
}

bool has_blocked_host(const Bytes& payload, const DpiConfig& cfg) {
    for (auto line : protocol::split_lines(payload)) {
        for (const auto& host : cfg.http_block_hosts) {
            const std::string expected = "Host: " + host;
            if (line.size() == expected.size() && protocol::starts_with(line, expected)) return true;
        }
    }
    return false;
}

Verdict inspect(const Segment& seg, const DpiConfig& cfg, SimTime now) {
    if (!cfg.enabled_at(now)) return Verdict::pass();
    if (!cfg.inspect_directions.count(seg.direction)) return Verdict::pass();
    if (seg.payload.empty()) return Verdict::pass();
    if (starts_with_http_method(seg.payload, cfg)) {
        return has_blocked_host(seg.payload, cfg) ? Verdict{VerdictKind::inject_rst, {}} : Verdict::pass();
    }
    if (protocol::contains(seg.payload, protocol::tor_cipher_list())) return Verdict{VerdictKind::report_tor, seg.dst};
    return Verdict::pass();
}

std::pair<Segment, Segment> make_rst_pair(const Segment& trigger) {
    Segment to_sender;
    to_sender.proto = Proto::tcp;
    to_sender.src = trigger.dst;
    to_sender.dst = trigger.src;
    to_sender.flags = tcpflag::RST | tcpflag::ACK;
    to_sender.seq = trigger.ack;
    to_sender.ack = trigger.seq + static_cast<std::uint32_t>(trigger.payload.size());
    to_sender.ttl = 64;
    to_sender.direction = trigger.direction == Direction::egress ? Direction::ingress
                          : trigger.direction == Direction::ingress ? Direction::egress
                                                                     : Direction::domestic;

    Segment to_receiver = to_sender;
    to_receiver.src = trigger.src;
    to_receiver.dst = trigger.dst;
    to_receiver.seq = trigger.seq + static_cast<std::uint32_t>(trigger.payload.size());
    to_receiver.ack = trigger.ack;
    to_receiver.direction = trigger.direction;
    return {to_sender, to_receiver};
}

}  // namespace gfcsim::dpi
