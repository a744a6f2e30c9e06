#include "gfcsim/analysis/log_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace gfcsim::analysis {
namespace {

constexpr double kHour = 3600.0;

std::string minute_str(double m) { return format_double(m, 4); }

}  // namespace

std::vector<ScanTiming> scan_timings(Records log) {
    std::vector<ScanTiming> out;
    for (const auto& r : log) {
        if (r.kind != EventKind::scan_started) continue;
        const double minute = static_cast<double>(r.time.sec % 3600) / 60.0;
        out.push_back({r.time, minute, static_cast<int>(r.time.sec % 3600 / 900)});
    }
    return out;
}

TimeSeries scan_timing_series(Records log, int k) {
    if (k < 0 || k > 3) throw std::invalid_argument("interval index must be in 0..3");
    TimeSeries s;
    double i = 0;
    for (const auto& st : scan_timings(log)) {
        if (st.interval == k) s.push(i++, st.minute);
    }
    return s;
}

WelchResult diurnal_delay_test(Records log, DiurnalWindows w) {
    std::vector<double> evening, night;
    for (const auto& st : scan_timings(log)) {
        const double hour = static_cast<double>(st.time.sec % kDay) / kHour;
        const double delay = static_cast<double>(st.time.sec % 900);
        if (hour >= w.evening_from && hour < w.evening_to) evening.push_back(delay);
        if (hour >= w.night_from && hour < w.night_to) night.push_back(delay);
    }
    return welch_test(evening, night);
}

ExperimentReport timing_report(Records log) {
    ExperimentReport rep;
    rep.name = "timing";
    const auto timings = scan_timings(log);
    rep.set("scans", static_cast<std::int64_t>(timings.size()));
    CsvTable raw({"scan", "time-s", "minute", "interval", "delay-s"});
    std::int64_t n = 0;
    for (const auto& st : timings) {
        raw.add_row({std::to_string(n++), std::to_string(st.time.sec), minute_str(st.minute),
                     std::to_string(st.interval), std::to_string(st.time.sec % 900)});
    }
    for (int k = 0; k < 4; ++k) {
        const auto vals = scan_timing_series(log, k).values();
        const std::string p = "interval" + std::to_string(k) + ".";
        rep.set(p + "count", static_cast<std::int64_t>(vals.size()));
        if (vals.empty()) continue;
        rep.set(p + "min-minute", *std::min_element(vals.begin(), vals.end()), 4);
        rep.set(p + "max-minute", *std::max_element(vals.begin(), vals.end()), 4);
    }
    try {
        const auto w = diurnal_delay_test(log);
        rep.set("diurnal.evening-mean-delay-s", w.mean_a, 3);
        rep.set("diurnal.night-mean-delay-s", w.mean_b, 3);
        rep.set("diurnal.evening-scans", static_cast<std::int64_t>(w.n_a));
        rep.set("diurnal.night-scans", static_cast<std::int64_t>(w.n_b));
        rep.set("diurnal.welch-t", w.t, 4);
        rep.set("diurnal.welch-df", w.df, 2);
        rep.set("diurnal.p-one-sided", w.p_one_sided, 8);
    } catch (const std::invalid_argument&) {
        rep.set("diurnal.welch-t", std::string("n/a"));
    }
    rep.tables["scans"] = std::move(raw);
    return rep;
}

ExperimentReport smooth_report(Records log, SmoothingParams params) {
    ExperimentReport rep;
    rep.name = "smooth";
    rep.set("alpha", params.alpha, 4);
    const auto timings = scan_timings(log);
    for (int k = 0; k < 4; ++k) {
        std::vector<double> times, minutes;
        for (const auto& st : timings) {
            if (st.interval != k) continue;
            times.push_back(static_cast<double>(st.time.sec));
            minutes.push_back(st.minute);
        }
        const auto sm = exp_smooth(minutes, params.alpha);
        CsvTable t({"index", "time-s", "minute", "smoothed"});
        for (std::size_t i = 0; i < sm.size(); ++i) {
            t.add_row({std::to_string(i), format_double(times[i], 0), minute_str(minutes[i]), minute_str(sm[i])});
        }
        const std::string p = "interval" + std::to_string(k) + ".";
        rep.set(p + "count", static_cast<std::int64_t>(sm.size()));
        if (sm.size() >= 3 && times.back() - times.front() >= 2 * kDay) {
            const double period = dominant_period(times, sm, 2 * kHour, 72 * kHour, 360.0);
            rep.set(p + "dominant-period-h", period / kHour, 2);
        }
        rep.tables["interval" + std::to_string(k)] = std::move(t);
    }
    return rep;
}

ExperimentReport reachability_report(Records log, const ReachabilityFilter& filter) {
    ExperimentReport rep;
    rep.name = "reachability";
    std::map<std::int64_t, std::set<std::string>> attempted, reached;
    std::set<std::string> targets;
    for (const auto& r : log) {
        if (r.kind != EventKind::connection_established && r.kind != EventKind::connection_failed) continue;
        if (!r.get("client") || !r.get("round")) continue;
        if (filter.region && r.value_or("region") != *filter.region) continue;
        if (filter.client && r.value_or("client") != *filter.client) continue;
        const auto round = r.int_or("round");
        const auto target = r.value_or("target");
        targets.insert(target);
        attempted[round].insert(target);
        if (r.kind == EventKind::connection_established) reached[round].insert(target);
    }
    rep.set("targets", static_cast<std::int64_t>(targets.size()));
    rep.set("rounds", static_cast<std::int64_t>(attempted.size()));
    CsvTable rounds({"round", "attempted", "reachable", "reachable-fraction"});
    for (const auto& [round, att] : attempted) {
        const auto ok = reached[round].size();
        rounds.add_row({std::to_string(round), std::to_string(att.size()), std::to_string(ok),
                        format_double(static_cast<double>(ok) / static_cast<double>(att.size()))});
    }
    if (!attempted.empty()) {
        const auto first = attempted.begin()->first;
        const auto ok = reached[first].size();
        rep.set("reachable-count", static_cast<std::int64_t>(ok));
        rep.set("reachable-fraction", static_cast<double>(ok) / static_cast<double>(attempted[first].size()));
        rep.set("unreachable-count", static_cast<std::int64_t>(attempted[first].size() - ok));
        if (attempted.size() >= 2) {
            const auto last = attempted.rbegin()->first;
            std::int64_t still = 0;
            for (const auto& t : reached[first]) still += reached[last].count(t) ? 1 : 0;
            rep.set("still-reachable-after-reingest", still);
        }
    }
    CsvTable per_target({"target", "rounds-attempted", "rounds-reachable"});
    for (const auto& t : targets) {
        std::int64_t a = 0, ok = 0;
        for (const auto& [round, att] : attempted) {
            a += att.count(t) ? 1 : 0;
            ok += reached[round].count(t) ? 1 : 0;
        }
        per_target.add_row({t, std::to_string(a), std::to_string(ok)});
    }
    rep.tables["rounds"] = std::move(rounds);
    rep.tables["targets"] = std::move(per_target);
    return rep;
}

ExperimentReport scanner_stats_report(Records log) {
    ExperimentReport rep;
    rep.name = "scanner-stats";
    std::int64_t scans = 0, master = 0, fresh = 0, recycled = 0;
    std::set<std::string> fresh_sources;
    std::map<std::string, std::string> source_as;
    for (const auto& r : log) {
        if (r.kind != EventKind::scan_started) continue;
        ++scans;
        const auto source = r.value_or("source");
        source_as.emplace(source, r.value_or("as"));
        if (r.value_or("master") == "1") {
            ++master;
        } else if (r.value_or("recycled") == "1") {
            ++recycled;
        } else {
            ++fresh;
            fresh_sources.insert(source);
        }
    }
    rep.set("scans", scans);
    rep.set("master-scans", master);
    rep.set("master-fraction", scans ? static_cast<double>(master) / static_cast<double>(scans) : 0.0);
    rep.set("non-master-scans", fresh + recycled);
    rep.set("non-master-recycled-scans", recycled);
    rep.set("non-master-unique-sources", static_cast<std::int64_t>(fresh_sources.size()));
    rep.set("non-master-unique-fraction",
            fresh ? static_cast<double>(fresh_sources.size()) / static_cast<double>(fresh) : 0.0);

    std::map<std::string, std::int64_t> as_count;
    for (const auto& [src, as] : source_as) ++as_count[as];
    CsvTable as_table({"as", "addresses", "fraction"});
    for (const auto& [as, n] : as_count) {
        const double f = static_cast<double>(n) / static_cast<double>(source_as.size());
        rep.set("as-fraction." + as, f);
        as_table.add_row({as, std::to_string(n), format_double(f)});
    }
    rep.set("distinct-sources", static_cast<std::int64_t>(source_as.size()));

    std::int64_t probes = 0, live = 0;
    std::map<std::int64_t, std::int64_t> deltas, onsets;
    for (const auto& r : log) {
        if (r.value_or("probe") != "scanner-liveness") continue;
        if (!source_as.count(r.value_or("target"))) continue;
        ++probes;
        if (r.kind != EventKind::connection_established) continue;
        ++live;
        ++deltas[r.int_or("ttl-delta")];
        ++onsets[r.int_or("minutes")];
    }
    rep.set("liveness-probes", probes);
    rep.set("live-after-scan", live);
    rep.set("live-fraction", probes ? static_cast<double>(live) / static_cast<double>(probes) : 0.0);
    CsvTable delta_table({"ttl-delta", "count"});
    std::int64_t mode = 0, mode_n = -1;
    for (const auto& [d, n] : deltas) {
        delta_table.add_row({std::to_string(d), std::to_string(n)});
        if (n > mode_n) {
            mode = d;
            mode_n = n;
        }
    }
    if (!deltas.empty()) rep.set("ttl-delta-mode", mode);
    CsvTable onset_table({"minutes", "count"});
    for (const auto& [m, n] : onsets) onset_table.add_row({std::to_string(m), std::to_string(n)});
    rep.tables["as"] = std::move(as_table);
    rep.tables["ttl-delta"] = std::move(delta_table);
    rep.tables["onset"] = std::move(onset_table);
    return rep;
}

TimeSeries usage_curve(Records log, Seconds bucket, std::optional<Seconds> horizon) {
    if (bucket <= 0) throw std::invalid_argument("bucket must be positive");
    Seconds end = horizon.value_or(log.empty() ? 0 : log.back().time.sec + 1);
    std::vector<double> counts(static_cast<std::size_t>((end + bucket - 1) / bucket), 0.0);
    for (const auto& r : log) {
        if (r.kind != EventKind::connection_established) continue;
        if (!r.get("client") || r.value_or("region") != "inside-china") continue;
        if (r.time.sec >= end) continue;
        counts[static_cast<std::size_t>(r.time.sec / bucket)] += 1.0;
    }
    TimeSeries s;
    for (std::size_t i = 0; i < counts.size(); ++i) s.push(static_cast<double>(i) * static_cast<double>(bucket), counts[i]);
    return s;
}

ExperimentReport usage_report(Records log, Seconds bucket, std::optional<Seconds> horizon) {
    ExperimentReport rep;
    rep.name = "usage";
    const auto curve = usage_curve(log, bucket, horizon);
    rep.set("bucket-s", bucket);
    rep.set("buckets", static_cast<std::int64_t>(curve.size()));
    double total = 0, peak = 0;
    CsvTable t({"bucket-start-s", "connections"});
    for (const auto& p : curve.points()) {
        total += p.x;
        peak = std::max(peak, p.x);
        t.add_row({format_double(p.t, 0), format_double(p.x, 0)});
    }
    rep.set("total", static_cast<std::int64_t>(total));
    rep.set("peak", static_cast<std::int64_t>(peak));
    rep.tables["curve"] = std::move(t);
    return rep;
}

}  // namespace gfcsim::analysis
