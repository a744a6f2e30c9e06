#include <doctest.h>

#include "gfcsim/blocktable/block_table.hpp"
#include "gfcsim/simnet/rng.hpp"

using namespace gfcsim;
using namespace gfcsim::blocktable;

namespace {

const Tuple kBridge{Address{0x8D140005}, 443};
const Tuple kClient{Address{0x720A0002}, 20000};

Segment seg(Tuple src, Tuple dst, std::uint8_t flags, Direction dir) {
    Segment s;
    s.src = src;
    s.dst = dst;
    s.flags = flags;
    s.direction = dir;
    return s;
}

}  // namespace

TEST_SUITE("blocktable") {

TEST_CASE("synack-drop lets the client SYN out and eats the reply") {
    BlockTable t;
    t.add(kBridge, BlockMode::synack_drop, BlockOrigin::scan, SimTime{906}, SimTime{900});
    CHECK(t.enforce(seg(kClient, kBridge, tcpflag::SYN, Direction::egress)) == Enforcement::pass);
    CHECK(t.enforce(seg(kBridge, kClient, tcpflag::SYN | tcpflag::ACK, Direction::ingress)) == Enforcement::drop);
    CHECK(t.enforce(seg(kBridge, kClient, tcpflag::ACK, Direction::ingress)) == Enforcement::pass);
    Tuple other_port = kBridge;
    other_port.port = 80;
    CHECK(t.enforce(seg(other_port, kClient, tcpflag::SYN | tcpflag::ACK, Direction::ingress)) == Enforcement::pass);
    CHECK(t.enforce(seg(kBridge, kClient, tcpflag::SYN | tcpflag::ACK, Direction::ingress), false) ==
          Enforcement::pass);
}

TEST_CASE("ip-drop blocks everything to and from the address") {
    BlockTable t;
    t.add(kBridge, BlockMode::ip_drop, BlockOrigin::static_list, SimTime{0});
    CHECK(t.blocks_address(kBridge.addr));
    CHECK(t.enforce(seg(kClient, kBridge, tcpflag::SYN, Direction::egress)) == Enforcement::drop);
    CHECK(t.enforce(seg(kBridge, kClient, tcpflag::ACK, Direction::ingress)) == Enforcement::drop);
    Segment ping = seg(kClient, {kBridge.addr, 0}, 0, Direction::egress);
    ping.proto = Proto::icmp_echo;
    CHECK(t.enforce(ping) == Enforcement::drop);
    CHECK(t.enforce(ping, false) == Enforcement::drop);
}

TEST_CASE("rst-on-connect answers SYNs with a reset") {
    BlockTable t;
    t.add(kBridge, BlockMode::rst_on_connect, BlockOrigin::static_list, SimTime{0});
    CHECK(t.enforce(seg(kClient, kBridge, tcpflag::SYN, Direction::egress)) == Enforcement::rst);
    CHECK(t.enforce(seg(kClient, kBridge, tcpflag::ACK, Direction::egress)) == Enforcement::pass);
}

TEST_CASE("adding is idempotent and a scan upgrades a consensus entry") {
    BlockTable t;
    t.add(kBridge, BlockMode::synack_drop, BlockOrigin::consensus, SimTime{0});
    t.add(kBridge, BlockMode::synack_drop, BlockOrigin::consensus, SimTime{5});
    CHECK(t.size() == 1);
    CHECK(t.find(kBridge, BlockMode::synack_drop)->added_at.sec == 0);
    CHECK(t.due_for_revalidation(SimTime{9000}).empty());
    t.add(kBridge, BlockMode::synack_drop, BlockOrigin::scan, SimTime{906}, SimTime{900});
    CHECK(t.find(kBridge, BlockMode::synack_drop)->origin == BlockOrigin::scan);
    CHECK(t.due_for_revalidation(SimTime{1800}).size() == 1);
    CHECK(t.due_for_revalidation(SimTime{900}).empty());
    CHECK(t.remove(kBridge, BlockMode::synack_drop));
    CHECK_FALSE(t.remove(kBridge, BlockMode::synack_drop));
    CHECK(t.size() == 0);
}

TEST_CASE("an unbroken failure streak of the threshold removes the entry") {
    BlockTable t;
    t.add(kBridge, BlockMode::synack_drop, BlockOrigin::scan, SimTime{906}, SimTime{900});
    CHECK(t.revalidate(kBridge, SimTime{1800}, true) == RevalidationResult::kept);
    CHECK(t.revalidate(kBridge, SimTime{2700}, false) == RevalidationResult::streak_started);
    Seconds cycle = 3600;
    for (; cycle < 2700 + 43200; cycle += 900) {
        REQUIRE(t.revalidate(kBridge, SimTime{cycle}, false) == RevalidationResult::streak_continues);
    }
    CHECK(cycle == 2700 + 43200);
    CHECK(t.revalidate(kBridge, SimTime{cycle}, false) == RevalidationResult::removed);
    CHECK(t.find(kBridge, BlockMode::synack_drop) == nullptr);
    CHECK(t.revalidate(kBridge, SimTime{cycle + 900}, false) == RevalidationResult::unknown);
}

TEST_CASE("a single success resets the streak") {
    BlockTable t;
    t.add(kBridge, BlockMode::synack_drop, BlockOrigin::scan, SimTime{0}, SimTime{0});
    t.revalidate(kBridge, SimTime{900}, false);
    for (Seconds c = 1800; c < 30000; c += 900) t.revalidate(kBridge, SimTime{c}, false);
    CHECK(t.revalidate(kBridge, SimTime{30600}, true) == RevalidationResult::kept);
    CHECK_FALSE(t.find(kBridge, BlockMode::synack_drop)->failure_streak_started);
    CHECK(t.revalidate(kBridge, SimTime{31500}, false) == RevalidationResult::streak_started);
    CHECK(t.find(kBridge, BlockMode::synack_drop)->failure_streak_started->sec == 31500);
}

TEST_CASE("only scan-origin entries are revalidated") {
    BlockTable t;
    t.add(kBridge, BlockMode::synack_drop, BlockOrigin::consensus, SimTime{0});
    CHECK(t.revalidate(kBridge, SimTime{900}, false) == RevalidationResult::unknown);
    CHECK(t.find(kBridge, BlockMode::synack_drop) != nullptr);
}

TEST_CASE("consensus ingest misses about the configured fraction") {
    BlockTable t;
    std::vector<Tuple> relays;
    for (std::uint32_t i = 0; i < 20000; ++i) relays.push_back({Address{0x50000001 + i}, 9001});
    RngStream r(12);
    const auto res = t.ingest_consensus(relays, SimTime{0}, r);
    CHECK(res.listed == relays.size());
    CHECK(res.added + res.missed == relays.size());
    const double miss = res.missed / double(relays.size());
    CHECK(miss == doctest::Approx(0.016).epsilon(0.2));
    CHECK(t.size() == res.added);
    const auto again = t.ingest_consensus(relays, SimTime{259200}, r);
    CHECK(again.added <= res.missed);
}

}  // TEST_SUITE
