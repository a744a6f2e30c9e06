#include <doctest.h>

#include "gfcsim/evasion/fragment.hpp"
#include "gfcsim/evasion/guard.hpp"
#include "gfcsim/evasion/spa.hpp"
#include "gfcsim/protocol/bytes.hpp"
#include "gfcsim/protocol/cipher_list.hpp"
#include "gfcsim/protocol/tls.hpp"

using namespace gfcsim;
using namespace gfcsim::evasion;
using protocol::to_bytes;

namespace {

Segment syn_from(Tuple src) {
    Segment s;
    s.src = src;
    s.dst = {Address{0x8D140005}, 443};
    s.flags = tcpflag::SYN;
    return s;
}

const Tuple kClient{Address{0x720A0002}, 20000};

}  // namespace

TEST_SUITE("evasion") {

TEST_CASE("16-byte fragmentation of the hello") {
    const auto hello = protocol::build_client_hello();
    const auto chunks = fragment_stream(hello, 16);
    REQUIRE(chunks.size() == 5);
    CHECK(chunks[0].size() == 16);
    CHECK(chunks[4].size() == 71 - 64);
    // The first chunk ends with a 5-byte remnant of the cipher list.
    CHECK(std::equal(chunks[0].begin() + 11, chunks[0].end(), protocol::kTorCipherList.begin()));
    Bytes joined;
    for (const auto& c : chunks) joined.insert(joined.end(), c.begin(), c.end());
    CHECK(joined == hello);
    CHECK_THROWS_AS(fragment_stream(hello, 0), std::invalid_argument);
    CHECK(fragment_stream({}, 8).empty());
}

TEST_CASE("no chunk holds the whole list for mss 1..57") {
    const auto hello = protocol::build_client_hello();
    for (std::size_t mss = 1; mss <= 57; ++mss) {
        for (const auto& c : fragment_stream(hello, mss)) REQUIRE_FALSE(protocol::contains(c, protocol::tor_cipher_list()));
    }
}

TEST_CASE("SYN guard accepts the nth SYN and counts per client tuple") {
    GuardPolicy p;
    p.syn_accept_index = 3;
    SynGuard g(p);
    CHECK(g.filter_syn(syn_from(kClient), SimTime{0}) == GuardDecision::silent_drop);
    CHECK(g.filter_syn(syn_from(kClient), SimTime{1}) == GuardDecision::silent_drop);
    Tuple other = kClient;
    other.port = 20001;
    CHECK(g.filter_syn(syn_from(other), SimTime{2}) == GuardDecision::silent_drop);
    CHECK(g.filter_syn(syn_from(kClient), SimTime{3}) == GuardDecision::accept);
    CHECK(g.filter_syn(syn_from(kClient), SimTime{7}) == GuardDecision::accept);
    g.on_established(kClient);
    CHECK(g.count(kClient) == 0);
    CHECK(g.filter_syn(syn_from(kClient), SimTime{8}) == GuardDecision::silent_drop);
}

TEST_CASE("a scanner with two SYNs never gets through n = 3") {
    GuardPolicy p;
    p.syn_accept_index = 3;
    SynGuard g(p);
    for (int scan = 0; scan < 100; ++scan) {
        Tuple src{Address{0x3C000001u + static_cast<std::uint32_t>(scan)}, 40000};
        REQUIRE(g.filter_syn(syn_from(src), SimTime{scan * 900}) == GuardDecision::silent_drop);
        REQUIRE(g.filter_syn(syn_from(src), SimTime{scan * 900 + 3}) == GuardDecision::silent_drop);
    }
}

TEST_CASE("idle counters start over") {
    GuardPolicy p;
    p.syn_accept_index = 2;
    SynGuard g(p);
    g.filter_syn(syn_from(kClient), SimTime{0});
    CHECK(g.filter_syn(syn_from(kClient), SimTime{61}) == GuardDecision::silent_drop);
    CHECK(g.filter_syn(syn_from(kClient), SimTime{62}) == GuardDecision::accept);
}

TEST_CASE("deaf window drops every SYN just after each quarter hour") {
    GuardPolicy p;
    p.syn_accept_index = 1;
    p.deaf_window = 300;
    SynGuard g(p);
    CHECK(g.in_deaf_window(SimTime{900}));
    CHECK(g.in_deaf_window(SimTime{1199}));
    CHECK_FALSE(g.in_deaf_window(SimTime{1200}));
    Tuple a = kClient, b = kClient;
    b.port = 20002;
    CHECK(g.filter_syn(syn_from(a), SimTime{905}) == GuardDecision::silent_drop);
    CHECK(g.filter_syn(syn_from(b), SimTime{1300}) == GuardDecision::accept);
}

TEST_CASE("guard policies are validated") {
    GuardPolicy p;
    p.syn_accept_index = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.synack_window_override = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.deaf_window = 900;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("window rewriting touches only the SYN/ACK window") {
    GuardPolicy p;
    p.synack_window_override = 40;
    Segment sa;
    sa.flags = tcpflag::SYN | tcpflag::ACK;
    sa.window = 65535;
    sa.seq = 17;
    const auto out = rewrite_synack_window(sa, p);
    CHECK(out.window == 40);
    CHECK(out.seq == 17);
    Segment ack;
    ack.flags = tcpflag::ACK;
    ack.window = 65535;
    CHECK(rewrite_synack_window(ack, p).window == 65535);
}

TEST_CASE("SPA tokens verify only with the right secret") {
    const auto secret = to_bytes("correct-horse");
    const auto tok = make_spa_token(secret, SimTime{1234});
    CHECK(tok.size() == kSpaTokenSize);
    CHECK(verify_spa_token(tok, secret) == SimTime{1234});
    CHECK_FALSE(verify_spa_token(tok, to_bytes("wrong")));
    auto bad = tok;
    bad.back() ^= 1;
    CHECK_FALSE(verify_spa_token(bad, secret));
    CHECK_FALSE(verify_spa_token(protocol::ByteView(tok).first(10), secret));
}

TEST_CASE("SPA gate opens the source for the validity period") {
    const auto secret = to_bytes("k");
    SpaGate gate({secret, 60});
    const Address client{0x720A0002}, stranger{0x3C000001};
    CHECK_FALSE(gate.allowed(client, SimTime{100}));
    CHECK(gate.on_datagram(client, make_spa_token(secret, SimTime{100}), SimTime{100}) == SimTime{160});
    CHECK(gate.allowed(client, SimTime{159}));
    CHECK_FALSE(gate.allowed(client, SimTime{160}));
    CHECK_FALSE(gate.allowed(stranger, SimTime{120}));
    CHECK_FALSE(gate.on_datagram(client, make_spa_token(secret, SimTime{100}), SimTime{161}));
    CHECK_FALSE(gate.on_datagram(client, make_spa_token(secret, SimTime{500}), SimTime{400}));
    CHECK_FALSE(gate.on_datagram(client, to_bytes("garbage"), SimTime{100}));
    CHECK_THROWS_AS(SpaGate({{}, 60}), std::invalid_argument);
}

}  // TEST_SUITE
