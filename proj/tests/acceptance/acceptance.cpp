// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gfcsim/analysis/log_analysis.hpp"
#include "gfcsim/analysis/series.hpp"
#include "gfcsim/scenario/scenario.hpp"
#include "gfcsim/sim/simulation.hpp"
#include "gfcsim/sim/sweep.hpp"

using namespace gfcsim;
namespace an = gfcsim::analysis;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

scenario::Scenario bundled(const std::string& name) {
    return scenario::load_scenario_file(std::string(GFCSIM_SCENARIO_DIR) + "/" + name + ".yaml");
}

scenario::HostSpec& host_of(scenario::Scenario& s, const std::string& name) {
    for (auto& h : s.hosts) {
        if (h.name == name) return h;
    }
    throw std::out_of_range("no host " + name);
}

using Attr = std::map<std::string, std::string>;

std::vector<EventLogRecord> select(const EventLog& log, EventKind kind, const Attr& m = {}) {
    std::vector<EventLogRecord> out;
    for (const auto& r : log.records()) {
        if (r.kind != kind) continue;
        bool ok = true;
        for (const auto& [k, v] : m) ok = ok && r.value_or(k) == v;
        if (ok) out.push_back(r);
    }
    return out;
}

std::size_t count(const EventLog& log, EventKind kind, const Attr& m = {}) { return select(log, kind, m).size(); }

std::unique_ptr<sim::Simulation> run(const scenario::Scenario& s, sim::RunOptions o = {}) {
    return sim::run_scenario(s, o);
}

std::string fmt(double v, int prec = 4) { return an::format_double(v, prec); }

// 1. Fingerprint context.
void dpi_fingerprint(Outcome& o) {
    const auto sim = run(bundled("dpi-context"));
    const auto& log = sim->log();
    const auto per_target = [&](const char* target) {
        return select(log, EventKind::scan_started, {{"target", target}, {"purpose", "detect"}});
    };
    const auto plain = per_target("141.20.0.5:443");
    const auto http = per_target("141.20.0.80:80");
    const auto zeroed = per_target("141.20.0.80:8080");
    o.require(plain.size() == 1, "plain hello: exactly one scan");
    o.require(http.size() == 0, "HTTP-embedded hello: no scan");
    o.require(zeroed.size() == 1, "zeroed prefix: exactly one scan");
    for (const auto* v : {&plain, &zeroed}) {
        for (const auto& r : *v) o.require(r.value_or("cycle") == "900", "scan belongs to the 900 s cycle");
    }
    o.detail << "scans plain=" << plain.size() << " http-ua=" << http.size() << " zeroed=" << zeroed.size();
}

// 2. No reassembly for any mss up to 57.
void no_reassembly(Outcome& o) {
    auto base = bundled("fragmentation");
    base.meta.duration = 8 * kQueuePeriod;
    std::size_t reports = 0, scans = 0, sessions = 0;
    for (std::uint16_t mss = 1; mss <= 57; ++mss) {
        auto s = base;
        for (auto& c : s.clients) c.fragment_mss = mss;
        const auto sim = run(s);
        const auto summary = sim->summary();
        reports += std::stoull(summary.at("dpi.reports"));
        scans += count(sim->log(), EventKind::scan_scheduled);
        const auto ok = count(sim->log(), EventKind::connection_established, {{"layer", "app"}});
        o.require(ok == 8, "mss " + std::to_string(mss) + ": all 8 sessions complete");
        sessions += ok;
    }
    o.require(reports == 0, "no report-tor verdicts");
    o.require(scans == 0, "no scans");
    o.detail << "mss 1..57 x 8 cycles: reports=" << reports << " scans=" << scans << " sessions=" << sessions;
}

// 3. Window rewriting.
void window_rewrite(Outcome& o) {
    const auto with_override = [](std::uint16_t w) {
        auto s = bundled("window-rewrite");
        s.meta.duration = 2 * 3600;
        host_of(s, "bridge").guard->synack_window_override = w;
        return run(s);
    };
    const auto small = with_override(40);
    const auto small_scans = count(small->log(), EventKind::scan_started);
    const auto small_app = count(small->log(), EventKind::connection_established, {{"layer", "app"}});
    o.require(small_scans == 0, "override 40: zero scans");
    o.require(small_app > 0 && count(small->log(), EventKind::connection_failed) == 0,
              "override 40: Tor connections succeed");
    o.detail << "w=40 scans=" << small_scans << " app=" << small_app;
    for (std::uint16_t w : {71, 72, 100, 1460, 65535}) {
        const auto sim = with_override(w);
        const auto n = count(sim->log(), EventKind::scan_started, {{"purpose", "detect"}});
        o.require(n >= 1, "override " + std::to_string(w) + ": scan occurs");
        o.detail << "; w=" << w << " scans=" << n;
    }
}

// 4. SYN filter.
void syn_filter(Outcome& o) {
    const auto clean = run(bundled("syn-filter"));
    const auto& log = clean->log();
    const auto scans = count(log, EventKind::scan_started);
    const auto scan_ok = count(log, EventKind::scan_succeeded) + count(log, EventKind::scan_failed, {{"outcome", "no-tor"}});
    const auto attempts = count(log, EventKind::connection_established, {{"layer", "tcp"}, {"client", "legit"}}) +
                          count(log, EventKind::connection_failed, {{"client", "legit"}});
    const auto app = count(log, EventKind::connection_established, {{"layer", "app"}, {"client", "legit"}});
    o.require(scans > 0, "scanner probes the bridge");
    o.require(scan_ok == 0, "scanner never establishes (lossless)");
    o.require(attempts > 0 && app == attempts, "lossless client always establishes");

    const auto lossy = run(bundled("syn-filter-loss"));
    const auto& ll = lossy->log();
    const auto fails = count(ll, EventKind::connection_failed, {{"client", "lossy"}});
    const auto tried = fails + count(ll, EventKind::connection_established, {{"layer", "tcp"}, {"client", "lossy"}});
    const auto lossy_ok = count(ll, EventKind::scan_succeeded) + count(ll, EventKind::scan_failed, {{"outcome", "no-tor"}});
    o.require(lossy_ok == 0, "scanner never establishes (lossy)");
    o.require(tried > 0, "lossy attempts recorded");
    o.detail << "scans=" << scans << " scanner-successes=" << scan_ok + lossy_ok << " legit=" << app << "/" << attempts
             << "; 30% loss collateral failure rate=" << fmt(double(fails) / double(std::max<std::size_t>(tried, 1)))
             << " (" << fails << "/" << tried << ")";
}

// 5. Block lifecycle.
void block_lifecycle(Outcome& o) {
    const auto s = bundled("block-lifecycle-12h");
    const auto sim = run(s);
    const auto& log = sim->log();
    const auto added = select(log, EventKind::block_added, {{"origin", "scan"}});
    const auto removed = select(log, EventKind::block_removed);
    o.require(added.size() == 1 && removed.size() == 1, "one block added and removed");
    if (added.empty() || removed.empty()) return;
    const SimTime from = s.find_host("bridge")->whitelist->from;
    const Seconds lifetime = removed[0].time.sec - from.sec;
    o.require(std::abs(lifetime - 43200) <= 900, "removal 43200 +/- 900 s after scanners are excluded");

    // While blocked: client SYNs cross the border, SYN/ACKs from the bridge do not.
    const SimTime t0 = added[0].time, t1 = removed[0].time;
    std::size_t syn_out = 0, synack_dropped = 0, synack_in = 0;
    std::map<std::string, const EventLogRecord*> sent;
    const auto from_client = [](const EventLogRecord& r) { return r.value_or("src").rfind("114.10.0.2:", 0) == 0; };
    const auto to_client = [](const EventLogRecord& r) { return r.value_or("dst").rfind("114.10.0.2:", 0) == 0; };
    for (const auto& r : log.records()) {
        if (r.kind == EventKind::segment_sent) sent[r.value_or("id")] = &r;
        if (r.time < t0 || r.time >= t1) continue;
        if (r.kind == EventKind::segment_delivered) {
            const auto flags = r.value_or("flags");
            if (flags == "SYN" && r.value_or("host") == "bridge" && from_client(r)) ++syn_out;
            if (flags == "SYN|ACK" && r.value_or("host") == "client-cn" && to_client(r)) ++synack_in;
        }
        if (r.kind == EventKind::segment_dropped && r.value_or("reason") == "enforcement") {
            auto it = sent.find(r.value_or("id"));
            if (it != sent.end() && it->second->value_or("flags") == "SYN|ACK" && to_client(*it->second)) ++synack_dropped;
        }
    }
    o.require(syn_out > 0, "client SYNs reach the bridge while blocked");
    o.require(synack_dropped > 0 && synack_in == 0, "SYN/ACKs dropped while blocked");
    o.detail << "block " << t0.sec << ".." << t1.sec << " s, lifetime since exclusion=" << lifetime
             << " s; SYNs delivered=" << syn_out << " SYN/ACKs dropped=" << synack_dropped
             << " delivered=" << synack_in;
}

// 6. Consensus reachability.
void reachability(Outcome& o) {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t i = 1; i <= 10; ++i) seeds.push_back(i);
    const auto measure = [](const sim::Simulation& sim, sim::SweepResult& r) {
        const auto rep = an::reachability_report(sim.log().records(), {std::string("inside-china"), std::nullopt});
        r.summary["reach.fraction"] = rep.metrics.at("reachable-fraction");
        r.summary["reach.count"] = rep.metrics.at("reachable-count");
        r.summary["reach.targets"] = rep.metrics.at("targets");
        if (auto it = rep.metrics.find("still-reachable-after-reingest"); it != rep.metrics.end())
            r.summary["reach.still"] = it->second;
    };
    const auto one = sim::sweep_parallel(bundled("reachability-2819"), seeds, measure);
    double sum = 0;
    for (const auto& r : one) {
        o.require(r.summary.at("reach.targets") == "2819", "2819 targets probed");
        sum += std::stod(r.summary.at("reach.fraction"));
    }
    const double mean = sum / double(one.size());
    o.require(std::abs(mean - 0.016) <= 0.005, "mean reachable fraction 0.016 +/- 0.005");
    o.detail << "mean fraction over 10 seeds=" << fmt(mean) << " (per seed:";
    for (const auto& r : one) o.detail << " " << r.summary.at("reach.count");
    o.detail << ")";

    const auto two = sim::sweep_parallel(bundled("reachability-2819-two-round"), seeds, measure);
    int worst = 0;
    for (const auto& r : two) worst = std::max(worst, std::stoi(r.summary.at("reach.still")));
    o.require(worst <= 2, "two-round still-reachable <= 2 for every seed");
    o.detail << "; two-round max still-reachable=" << worst;
}

// 7. Directory authorities.
void dir_authorities(Outcome& o) {
    const auto sim = run(bundled("dirauth"));
    const auto& log = sim->log();
    const auto targets = [&](EventKind k, const char* client) {
        std::set<std::string> out;
        for (const auto& r : select(log, k, {{"client", client}, {"layer", "tcp"}})) out.insert(r.value_or("target"));
        return out;
    };
    const auto in_ok = targets(EventKind::connection_established, "inside");
    const auto in_bad = targets(EventKind::connection_failed, "inside");
    const auto out_ok = targets(EventKind::connection_established, "outside");
    const auto out_bad = targets(EventKind::connection_failed, "outside");
    o.require(in_bad.size() == 8 && in_ok.size() == 1, "8 of 9 unreachable from inside");
    o.require(out_ok.size() == 9 && out_bad.empty(), "9 of 9 reachable from outside");
    o.detail << "inside unreachable=" << in_bad.size() << "/9, outside reachable=" << out_ok.size() << "/9";
}

// 8. Scanner distribution.
void scanner_distribution(Outcome& o) {
    const auto sim = run(bundled("scanner-attraction-17d"));
    const auto rep = an::scanner_stats_report(sim->log().records());
    const double scans = rep.number("scans");
    const double master = rep.number("master-fraction");
    const double unique = rep.number("non-master-unique-fraction");
    const double recycled = rep.number("non-master-recycled-scans");
    const double live = rep.number("live-fraction");
    const double mode = rep.number("ttl-delta-mode");
    o.require(scans >= 3000, ">= 3000 scans");
    o.require(std::abs(master - 0.51) <= 0.03, "master fraction 0.51 +/- 0.03");
    o.require(recycled == 0 && unique == 1.0, "non-master sources unique before exhaustion");
    const std::vector<std::pair<std::string, double>> as{{"AS4837", 0.657}, {"AS4134", 0.305}, {"AS17622", 0.038}};
    o.detail << "scans=" << scans << " master=" << fmt(master) << " unique=" << fmt(unique) << " AS=";
    for (const auto& [label, want] : as) {
        const double got = rep.number("as-fraction." + label);
        o.require(std::abs(got - want) <= 0.02, label + " within 0.02");
        o.detail << label << ":" << fmt(got) << " ";
    }
    o.require(std::abs(live - 0.20) <= 0.04, "live-after-scan 0.20 +/- 0.04");
    o.require(mode == 1, "ttl-delta mode +1");
    o.detail << "live=" << fmt(live) << " ttl-mode=" << mode;
}

// 9. Timing patterns.
void timing(Outcome& o) {
    const auto flat = run(bundled("timing-flat"));
    const auto ft = an::scan_timings(flat->log().records());
    bool in_range = !ft.empty();
    for (const auto& t : ft) in_range = in_range && t.minute - 15.0 * t.interval <= 3.0;
    o.require(in_range, "flat: minutes within [15k, 15k+3]");

    const auto diurnal = run(bundled("timing-diurnal"));
    const auto records = diurnal->log().records();
    const auto w = an::diurnal_delay_test(records);
    o.require(w.mean_a > w.mean_b && w.p_one_sided < 0.05, "evening delay > night delay at 95%");

    const auto report = an::smooth_report(records, {diurnal->scenario().smoothing_alpha});
    o.detail << "flat scans=" << ft.size() << "; evening=" << fmt(w.mean_a, 1) << " s night=" << fmt(w.mean_b, 1)
             << " s p=" << w.p_one_sided << "; periods(h)=";
    for (int k = 0; k < 4; ++k) {
        const auto key = "interval" + std::to_string(k) + ".dominant-period-h";
        const bool has = report.metrics.count(key) == 1;
        o.require(has, key + " present");
        if (!has) continue;
        const double p = report.number(key);
        o.require(std::abs(p - 24.0) <= 1.7, key + " within 24 +/- 1.7 h");
        o.detail << fmt(p, 2) << " ";
    }
}

// 10. Smoothing oracle.
void smoothing_oracle(Outcome& o) {
    std::mt19937_64 gen(20131);
    std::uniform_real_distribution<double> val(0, 60), alpha(0, 1);
    std::uniform_int_distribution<int> len(0, 300);
    int mismatches = 0;
    for (int c = 0; c < 1000; ++c) {
        std::vector<double> x(len(gen));
        for (auto& v : x) v = val(gen);
        const double a = alpha(gen);
        std::vector<double> ref(x.size());
        for (std::size_t t = 0; t < x.size(); ++t) ref[t] = t < 2 ? x[0] : a * x[t - 1] + (1 - a) * ref[t - 1];
        if (an::exp_smooth(x, a) != ref) ++mismatches;
    }
    o.require(mismatches == 0, "bitwise match on 1000 random cases");
    std::vector<double> x(100);
    for (auto& v : x) v = val(gen);
    const auto zero = an::exp_smooth(x, 0.0);
    const auto one = an::exp_smooth(x, 1.0);
    bool closed = zero[0] == x[0] && one[0] == x[0];
    for (std::size_t t = 1; t < x.size(); ++t) closed = closed && zero[t] == x[0] && one[t] == x[t - 1];
    o.require(closed, "alpha 0 and 1 closed forms");
    o.detail << "mismatches=" << mismatches << "/1000, closed forms " << (closed ? "hold" : "broken");
}

// 11. Website block.
void website_block(Outcome& o) {
    const auto sim = run(bundled("website-block"));
    const auto& log = sim->log();
    const auto resets = select(log, EventKind::rst_injected);
    std::set<std::string> toward;
    for (const auto& r : resets) toward.insert(r.value_or("to"));
    o.require(toward.count("client-cn") == 1 && toward.count("web") == 1, "RST toward both ends");
    const auto failed = select(log, EventKind::connection_failed, {{"client", "torproject.org"}});
    o.require(failed.size() == 1 && failed[0].value_or("reason") == "reset", "torproject.org torn down");
    for (const char* label : {"orproject.org", "torproject.or", "https"}) {
        const bool ok = count(log, EventKind::connection_established, {{"client", label}, {"layer", "app"}}) == 1 &&
                        count(log, EventKind::connection_failed, {{"client", label}}) == 0;
        o.require(ok, std::string(label) + " passes");
    }
    o.require(resets.size() == 2, "resets only for the blocked host");
    o.detail << "rst-injected=" << resets.size() << " toward {";
    for (const auto& t : toward) o.detail << " " << t;
    o.detail << " }; near misses and HTTPS pass";
}

// 12. Downtime spike.
void downtime(Outcome& o) {
    const auto s = bundled("downtime");
    const auto sim = run(s);
    if (s.dpi.disabled.size() != 1) throw std::runtime_error("downtime scenario needs one disabled window");
    const auto win = s.dpi.disabled.front();
    const auto curve = an::usage_curve(sim->log().records(), kDay, s.meta.duration);
    double inside = 0, outside = 0, in_n = 0, out_n = 0, min_in = 1e300, max_out = 0;
    for (const auto& p : curve.points()) {
        const Seconds start = static_cast<Seconds>(p.t);
        if (start >= win.from.sec && start + kDay <= win.to.sec) {
            inside += p.x;
            ++in_n;
            min_in = std::min(min_in, p.x);
        } else {
            outside += p.x;
            ++out_n;
            max_out = std::max(max_out, p.x);
        }
    }
    const double in_rate = inside / in_n, out_rate = outside / out_n;
    o.require(in_rate > 5 * out_rate, "window rate > 5x outside rate");
    o.require(min_in > max_out, "spike confined to the window");
    std::size_t scans_in_window = 0;
    for (const auto& r : select(sim->log(), EventKind::scan_started)) {
        if (r.time >= win.from && r.time < win.to) ++scans_in_window;
    }
    o.require(scans_in_window == 0, "no scans while inspection is down");
    o.detail << "daily mean inside=" << fmt(in_rate, 2) << " outside=" << fmt(out_rate, 2)
             << " ratio=" << (out_rate > 0 ? fmt(in_rate / out_rate, 1) : std::string("inf"))
             << "; scans in window=" << scans_in_window;
}

// 13. Determinism.
void determinism(Outcome& o) {
    const auto render = [](const sim::Simulation& sim) {
        const auto records = sim.log().records();
        std::string out = sim.log().to_string();
        for (const auto& rep : {an::timing_report(records), an::smooth_report(records, {sim.scenario().smoothing_alpha}),
                                an::reachability_report(records), an::scanner_stats_report(records),
                                an::usage_report(records, 3600)}) {
            out += rep.summary();
            for (const auto& [_, t] : rep.tables) out += t.str();
        }
        return out;
    };
    int checked = 0, differing = 0;
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(GFCSIM_SCENARIO_DIR)) {
        if (e.path().extension() == ".yaml") names.push_back(e.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    for (const auto& name : names) {
        const auto s = bundled(name);
        for (std::uint64_t seed : {s.meta.seed, std::uint64_t{7}}) {
            sim::RunOptions opts;
            opts.seed = seed;
            const auto a = render(*run(s, opts));
            const auto b = render(*run(s, opts));
            ++checked;
            if (a != b) {
                ++differing;
                o.require(false, name + " seed " + std::to_string(seed) + " differs");
            }
        }
    }
    o.detail << checked << " scenario/seed pairs, " << differing << " differing";
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"DPI fingerprint", dpi_fingerprint},
        {"no reassembly", no_reassembly},
        {"window rewriting", window_rewrite},
        {"SYN filter", syn_filter},
        {"block lifecycle", block_lifecycle},
        {"consensus reachability", reachability},
        {"directory authorities", dir_authorities},
        {"scanner distribution", scanner_distribution},
        {"timing", timing},
        {"smoothing oracle", smoothing_oracle},
        {"website block", website_block},
        {"downtime spike", downtime},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "[exception: " << e.what() << "]";
        }
        failures += !o.pass;
        std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
