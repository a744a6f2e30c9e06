#include <doctest.h>

#include <cmath>
#include <set>

#include "gfcsim/sim/simulation.hpp"
#include "gfcsim/sim/sweep.hpp"
#include "support.hpp"

using namespace gfcsim;
using namespace testing;
using gfcsim::sim::RunOptions;

namespace {

/// Failure probability of an n-th-SYN guard behind a link that loses each
/// packet with probability q: a of the six SYNs arrive; the connection fails
/// when fewer than n arrive or every SYN/ACK from SYN n onward is lost.
double guarded_failure(double q, int n, int syns) {
    double total = 0;
    for (int a = 0; a <= syns; ++a) {
        const double arrive = std::tgamma(syns + 1) / (std::tgamma(a + 1) * std::tgamma(syns - a + 1)) *
                              std::pow(1 - q, a) * std::pow(q, syns - a);
        total += arrive * std::pow(q, std::max(0, a - (n - 1)));
    }
    return total;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("a plain handshake is scanned at the next quarter hour") {
    RunOptions o;
    o.duration = 1800;
    const auto sim = run(bundled("plain-client"), o);
    const auto& log = sim->log();
    const auto app = select(log, EventKind::connection_established, {{"layer", "app"}});
    REQUIRE(app.size() == 1);
    CHECK(app[0].time.sec == 60);
    const auto scans = select(log, EventKind::scan_started, {{"purpose", "detect"}});
    REQUIRE(scans.size() == 1);
    CHECK(scans[0].value_or("cycle") == "900");
    CHECK(scans[0].time.sec >= 900);
    CHECK(scans[0].time.sec <= 900 + 180);
    CHECK(count(log, EventKind::scan_succeeded) == 1);
    const auto blocks = select(log, EventKind::block_added, {{"origin", "scan"}});
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].value_or("target") == "141.20.0.5:443");
}

TEST_CASE("a blocked bridge is unreachable from inside afterwards") {
    RunOptions o;
    o.duration = 3 * 3600;
    const auto sim = run(bundled("plain-client"), o);
    const auto fails = select(sim->log(), EventKind::connection_failed, {{"client", "plain"}});
    CHECK(fails.size() >= 4);
    for (const auto& f : fails) CHECK(f.value_or("reason") == "syn-timeout");
    CHECK(sim->summary().at("dpi.enforcement-drops") != "0");
}

TEST_CASE("duration zero yields an empty log") {
    RunOptions o;
    o.duration = 0;
    const auto sim = run(bundled("plain-client"), o);
    CHECK(sim->log().records().empty());
}

TEST_CASE("a simulation runs once") {
    sim::Simulation s(bundled("dpi-context"), {});
    s.run();
    CHECK_THROWS_AS(s.run(), SimulationError);
}

TEST_CASE("same seed, same log; other seed, other log") {
    RunOptions o;
    o.duration = 6 * 3600;
    const auto s = bundled("plain-client");
    const auto a = sim::log_digest(run(s, o)->log());
    CHECK(a == sim::log_digest(run(s, o)->log()));
    o.seed = 2;
    CHECK(a != sim::log_digest(run(s, o)->log()));
}

TEST_CASE("serial and parallel sweeps agree") {
    auto s = bundled("plain-client");
    s.meta.duration = 6 * 3600;
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    const auto a = sim::sweep_serial(s, seeds);
    const auto b = sim::sweep_parallel(s, seeds);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].seed == seeds[i]);
        CHECK(a[i].seed == b[i].seed);
        CHECK(a[i].log_digest == b[i].log_digest);
        CHECK(a[i].summary == b[i].summary);
    }
}

TEST_CASE("evasion scenarios stay unblocked for the whole day") {
    for (const char* name : {"fragmentation", "window-rewrite", "syn-filter", "deaf-window", "spa", "obfsproxy"}) {
        CAPTURE(name);
        const auto sim = run(bundled(name));
        const auto& log = sim->log();
        CHECK(count(log, EventKind::block_added, {{"origin", "scan"}}) == 0);
        CHECK(count(log, EventKind::scan_succeeded) == 0);
        CHECK(count(log, EventKind::connection_established, {{"layer", "app"}, {"region", "inside-china"}}) >= 40);
    }
}

TEST_CASE("one careless user gets a careful bridge blocked") {
    const auto sim = run(bundled("mixed-population"));
    CHECK(count(sim->log(), EventKind::block_added, {{"origin", "scan"}}) == 1);
}

TEST_CASE("the SYN filter costs a clean-path client three seconds") {
    RunOptions o;
    o.duration = 900;
    const auto sim = run(bundled("syn-filter"), o);
    const auto tcp = select(sim->log(), EventKind::connection_established, {{"layer", "tcp"}, {"attempt", "1"}});
    REQUIRE(tcp.size() == 1);
    CHECK(tcp[0].time.sec == 60 + 3);
    CHECK(sim->host("bridge")->stats().guard_drops == 2);
}

TEST_CASE("the SYN filter under loss matches the analytic failure rate") {
    const double expected = guarded_failure(0.3, 3, 6);
    CHECK(expected == doctest::Approx(0.164329).epsilon(1e-5));
    const auto sim = run(bundled("syn-filter-loss"));
    const auto& log = sim->log();
    const double n = double(count(log, EventKind::connection_established, {{"layer", "tcp"}, {"client", "lossy"}}) +
                            count(log, EventKind::connection_failed, {{"client", "lossy"}}));
    CHECK(n == 10000);
    const double rate = count(log, EventKind::connection_failed, {{"client", "lossy"}}) / n;
    CHECK(std::abs(rate - expected) < 4 * std::sqrt(expected * (1 - expected) / n));
}

TEST_CASE("without the filter the same loss fails far less often") {
    auto s = bundled("syn-filter-loss");
    host_of(s, "bridge").guard.reset();
    for (auto& c : s.clients) c.count = 4000;
    const auto sim = run(s);
    const double n = 4000;
    const double rate = count(sim->log(), EventKind::connection_failed, {{"client", "lossy"}}) / n;
    const double expected = std::pow(1 - 0.7 * 0.7, 6);
    CHECK(std::abs(rate - expected) < 4 * std::sqrt(expected * (1 - expected) / n) + 1e-3);
}

TEST_CASE("a closed port answers with a reset") {
    auto s = bundled("plain-client");
    s.meta.duration = 600;
    s.clients[0].targets = {*Tuple::parse("141.20.0.5:444")};
    const auto sim = run(s);
    const auto fails = select(sim->log(), EventKind::connection_failed);
    REQUIRE(fails.size() == 1);
    CHECK(fails[0].value_or("reason") == "reset");
    CHECK(fails[0].time.sec == 60);
    CHECK(count(sim->log(), EventKind::scan_scheduled) == 0);
}

TEST_CASE("a whitelist admits the listed client only") {
    const auto sim = run(bundled("block-lifecycle-12h"));
    const auto& log = sim->log();
    const auto from = sim->scenario().find_host("bridge")->whitelist->from.sec;
    for (const auto& r : select(log, EventKind::scan_succeeded)) CHECK(r.time.sec < from + 900);
    CHECK(sim->host("bridge")->stats().whitelist_drops > 0);
    CHECK(count(log, EventKind::block_removed) == 1);
}

TEST_CASE("scan sources are pinged and some answer") {
    auto s = bundled("scanner-attraction-17d");
    s.meta.duration = 2 * 86400;
    const auto sim = run(s);
    const auto& log = sim->log();
    const auto live = select(log, EventKind::connection_established, {{"probe", "scanner-liveness"}});
    const auto dead = select(log, EventKind::connection_failed, {{"probe", "scanner-liveness"}});
    REQUIRE(live.size() + dead.size() > 100);
    const std::set<std::string> deltas{"1", "65", "192"};
    for (const auto& r : live) {
        if (r.value_or("target") == "114.10.0.2") {
            CHECK(r.value_or("ttl-delta") == "0");
            continue;
        }
        CHECK(deltas.count(r.value_or("ttl-delta")) == 1);
        const int m = std::stoi(r.value_or("minutes"));
        CHECK(m >= 1);
        CHECK(m <= 16);
        CHECK(r.get("client") == nullptr);
    }
}

}  // TEST_SUITE
