#include <doctest.h>

#include "gfcsim/dpi/dpi.hpp"
#include "gfcsim/evasion/fragment.hpp"
#include "gfcsim/protocol/bytes.hpp"
#include "gfcsim/protocol/cipher_list.hpp"
#include "gfcsim/protocol/http.hpp"
#include "gfcsim/protocol/tls.hpp"
#include "gfcsim/simnet/rng.hpp"

using namespace gfcsim;
using namespace gfcsim::protocol;
using dpi::VerdictKind;

namespace {

Segment egress(Bytes payload) {
    Segment s;
    s.src = {Address{0x720A0002}, 20000};
    s.dst = {Address{0x8D140005}, 443};
    s.flags = tcpflag::ACK;
    s.direction = Direction::egress;
    s.payload = std::move(payload);
    return s;
}

VerdictKind verdict(const Bytes& payload, const dpi::DpiConfig& cfg = {}) {
    return dpi::inspect(egress(payload), cfg, SimTime{0}).kind;
}

Bytes http_for(const std::string& host) { return serialize_http(make_get(host)); }

}  // namespace

TEST_SUITE("dpi") {

TEST_CASE("plain hello leaving China is reported with its destination") {
    const auto v = dpi::inspect(egress(build_client_hello()), {}, SimTime{0});
    CHECK(v.kind == VerdictKind::report_tor);
    CHECK(v.target.str() == "141.20.0.5:443");
}

TEST_CASE("hello inside an HTTP request is judged by the HTTP rules") {
    const auto req = serialize_http(make_get("www.example.com", build_client_hello()));
    CHECK(verdict(req) == VerdictKind::pass);
    auto zeroed = req;
    std::fill_n(zeroed.begin(), 6, std::uint8_t{0});
    CHECK(verdict(zeroed) == VerdictKind::report_tor);
}

TEST_CASE("payloads opening with a method token never yield report-tor") {
    RngStream r(9);
    for (const char* token : {"GET ", "POST ", "HEAD "}) {
        for (int i = 0; i < 300; ++i) {
            Bytes p = to_bytes(token);
            const auto junk = r.uniform_int(0, 40);
            for (int j = 0; j < junk; ++j) p.push_back(static_cast<std::uint8_t>(r.next_u64()));
            p.insert(p.end(), kTorCipherList.begin(), kTorCipherList.end());
            REQUIRE(verdict(p) != VerdictKind::report_tor);
        }
    }
}

TEST_CASE("no-reassembly: any two-way split of the hello passes") {
    const auto hello = build_client_hello();
    for (std::size_t cut = 1; cut < hello.size(); ++cut) {
        const Bytes head(hello.begin(), hello.begin() + static_cast<std::ptrdiff_t>(cut));
        const Bytes tail(hello.begin() + static_cast<std::ptrdiff_t>(cut), hello.end());
        const bool head_whole = contains(head, tor_cipher_list());
        const bool tail_whole = contains(tail, tor_cipher_list());
        CHECK((verdict(head) == VerdictKind::report_tor) == head_whole);
        CHECK((verdict(tail) == VerdictKind::report_tor) == tail_whole);
        const bool splits_list = cut > kClientHelloPreamble && cut < kClientHelloPreamble + kTorCipherList.size();
        if (splits_list) {
            CHECK(verdict(head) == VerdictKind::pass);
            CHECK(verdict(tail) == VerdictKind::pass);
        }
    }
}

TEST_CASE("no-reassembly: fragmenting with any mss up to 57 never reports") {
    const auto hello = build_client_hello();
    for (std::size_t mss = 1; mss <= 57; ++mss) {
        for (const auto& chunk : evasion::fragment_stream(hello, mss)) REQUIRE(verdict(chunk) == VerdictKind::pass);
    }
    bool some_hit = false;
    for (const auto& chunk : evasion::fragment_stream(hello, 71)) some_hit |= verdict(chunk) == VerdictKind::report_tor;
    CHECK(some_hit);
}

TEST_CASE("only egress is inspected by default") {
    RngStream r(11);
    for (auto dir : {Direction::ingress, Direction::domestic}) {
        for (int i = 0; i < 200; ++i) {
            Bytes p;
            const auto n = r.uniform_int(0, 100);
            for (int j = 0; j < n; ++j) p.push_back(static_cast<std::uint8_t>(r.next_u64()));
            if (i % 2) p.insert(p.begin(), kTorCipherList.begin(), kTorCipherList.end());
            if (i % 3 == 0) p = http_for("torproject.org");
            auto s = egress(p);
            s.direction = dir;
            const auto v = dpi::inspect(s, {}, SimTime{0}).kind;
            REQUIRE(v != VerdictKind::report_tor);
            REQUIRE(v != VerdictKind::inject_rst);
        }
    }
}

TEST_CASE("Host header must match a blocked name exactly") {
    CHECK(verdict(http_for("torproject.org")) == VerdictKind::inject_rst);
    CHECK(verdict(http_for("orproject.org")) == VerdictKind::pass);
    CHECK(verdict(http_for("torproject.or")) == VerdictKind::pass);
    CHECK(verdict(http_for("www.torproject.org")) == VerdictKind::pass);
    CHECK(verdict(build_browser_hello()) == VerdictKind::pass);
}

TEST_CASE("inspection is off during disabled windows") {
    dpi::DpiConfig cfg;
    cfg.disabled.push_back({SimTime{100}, SimTime{200}});
    const auto hello = egress(build_client_hello());
    CHECK(dpi::inspect(hello, cfg, SimTime{99}).kind == VerdictKind::report_tor);
    CHECK(dpi::inspect(hello, cfg, SimTime{100}).kind == VerdictKind::pass);
    CHECK(dpi::inspect(hello, cfg, SimTime{199}).kind == VerdictKind::pass);
    CHECK(dpi::inspect(hello, cfg, SimTime{200}).kind == VerdictKind::report_tor);
}

TEST_CASE("reset pair targets both endpoints with matching sequence numbers") {
    auto trigger = egress(http_for("torproject.org"));
    trigger.seq = 100;
    trigger.ack = 500;
    const auto [to_sender, to_receiver] = dpi::make_rst_pair(trigger);
    CHECK(to_sender.dst == trigger.src);
    CHECK(to_sender.src == trigger.dst);
    CHECK(to_sender.seq == 500);
    CHECK(to_receiver.dst == trigger.dst);
    CHECK(to_receiver.seq == 100 + trigger.payload.size());
    CHECK(to_sender.has(tcpflag::RST));
    CHECK(to_receiver.has(tcpflag::RST));
}

}  // TEST_SUITE
