#include "gfcsim/sim/simulation.hpp"

#include <algorithm>

namespace gfcsim::sim {

using blocktable::BlockMode;
using blocktable::BlockOrigin;

Simulation::Simulation(scenario::Scenario s, RunOptions opts)
    : scenario_(std::move(s)),
      seed_(opts.seed.value_or(scenario_.meta.seed)),
      duration_(opts.duration.value_or(scenario_.meta.duration)),
      rng_(seed_),
      net_(sched_, rng_, log_, topo_),
      ctx_{sched_, rng_, log_, topo_, net_},
      table_(scenario_.blocking.policy) {
    if (duration_ < 0) throw std::invalid_argument("duration must be non-negative");
    build();
}

Simulation::~Simulation() = default;

void Simulation::build() {
    auto& sc = scenario_;
    net_.set_segment_logging(sc.meta.log_segments);

    for (auto& spec : sc.hosts) {
        if (sc.scanner.enabled && spec.name == sc.scanner.host) spec.tcp.initial_ttl = sc.scanner.initial_ttl;
        for (const auto& rs : sc.relay_sets) {
            if (rs.host != spec.name) continue;
            const bool served = std::any_of(spec.services.begin(), spec.services.end(),
                                            [&](const auto& sv) { return sv.port == rs.port; });
            if (!served) spec.services.push_back({rs.port, scenario::ServiceKind::tor_relay, protocol::Transport::plain_tor, {}});
        }
        HostInfo info{spec.name, spec.region, spec.addresses, spec.roles};
        const HostId id = topo_.add_host(info);
        for (auto a : spec.addresses) topo_.assign_address(a, id);
    }
    for (const auto& rs : sc.relay_sets) {
        const HostId id = *topo_.find(rs.host);
        for (const auto& t : rs.tuples()) topo_.assign_address(t.addr, id);
    }

    queue_ = std::make_unique<scanner::ScanQueue>(sc.scanner.load, rng_.stream(RngStreams::kDelays),
                                                  sc.blocking.policy.revalidation_period);
    pool_ = std::make_unique<scanner::ScannerPool>(sc.scanner.pool, rng_.stream(RngStreams::kScannerPool));
    if (sc.scanner.enabled) {
        const HostId id = *topo_.find(sc.scanner.host);
        for (auto a : pool_->addresses()) topo_.assign_address(a, id);
    }

    for (const auto& l : sc.links) {
        Link link;
        link.a = *topo_.find(l.a);
        link.b = *topo_.find(l.b);
        link.delay = l.delay;
        link.loss = l.loss;
        link.hop_count = l.hop_count;
        link.border = l.border;
        link.gfc = l.dpi;
        topo_.add_link(link);
    }

    for (HostId id = 0; id < sc.hosts.size(); ++id) {
        hosts_.push_back(std::make_unique<Host>(ctx_, id, sc.hosts[id]));
        net_.attach(id, hosts_.back().get());
    }

    gfc_ = std::make_unique<Gfc>(ctx_, sc.dpi, table_, *queue_);
    net_.set_inspector(gfc_.get());
    if (sc.scanner.enabled) {
        Host& sh = *hosts_[*topo_.find(sc.scanner.host)];
        scanner_ = std::make_unique<ScannerService>(ctx_, sh, sc.scanner, sc.dpi, table_, *queue_, *pool_);
        const HostId sid = sh.id();
        gfc_->set_exemption([this, sid](Address a) {
            auto o = topo_.owner(a);
            return o && *o == sid;
        });
    } else {
        queue_->set_listener([this](const scanner::ScanJob& job, bool created) {
            if (!created) return;
            log_.emit(sched_.now(), EventKind::scan_scheduled,
                      {{"cycle", std::to_string(job.scheduled_for.sec)},
                       {"delay", std::to_string(job.attempt_delay)},
                       {"detected-at", std::to_string(job.detected_at.sec)},
                       {"purpose", purpose_of(job)},
                       {"target", job.target.str()}});
        });
    }

    for (const auto& c : sc.clients) {
        Host& h = *hosts_[*topo_.find(c.host)];
        clients_.push_back(std::make_unique<ClientApp>(h, c));
    }
}

void Simulation::schedule_blocking() {
    const SimTime end{duration_};
    const auto& b = scenario_.blocking;
    sched_.schedule(SimTime{0}, [this, &b] {
        auto add = [this](const Tuple& t, BlockMode mode, BlockOrigin origin) {
            table_.add(t, mode, origin, sched_.now());
            Attributes a{{"mode", blocktable::to_string(mode)},
                         {"origin", blocktable::to_string(origin)},
                         {"target", mode == BlockMode::ip_drop ? t.addr.str() : t.str()}};
            log_.emit(sched_.now(), EventKind::block_added, std::move(a));
        };
        for (const auto& d : b.dir_authorities) {
            if (d.blocked) add(d.tuple, BlockMode::ip_drop, BlockOrigin::static_list);
        }
        for (const auto& t : b.static_blacklist) add(t, BlockMode::rst_on_connect, BlockOrigin::static_list);
    });

    if (!b.consensus.enabled) return;
    const auto* set = scenario_.find_relay_set(b.consensus.relay_set);
    auto relays = std::make_shared<std::vector<Tuple>>(set->tuples());
    const Seconds period = b.policy.consensus_ingest_period;
    for (int round = 0; b.consensus.rounds == 0 || round < b.consensus.rounds; ++round) {
        const SimTime at = b.consensus.first_ingest + period * round;
        if (at >= end) break;
        sched_.schedule(at, [this, relays, round] {
            std::vector<bool> had(relays->size());
            for (std::size_t i = 0; i < relays->size(); ++i)
                had[i] = table_.find((*relays)[i], BlockMode::synack_drop) != nullptr;
            const auto r = table_.ingest_consensus(*relays, sched_.now(), rng_.stream(RngStreams::kConsensus));
            for (std::size_t i = 0; i < relays->size(); ++i) {
                if (had[i] || !table_.find((*relays)[i], BlockMode::synack_drop)) continue;
                log_.emit(sched_.now(), EventKind::block_added,
                          {{"mode", "synack-drop"},
                           {"origin", "consensus"},
                           {"round", std::to_string(round)},
                           {"target", (*relays)[i].str()}});
            }
            (void)r;
        });
    }
}

void Simulation::run() {
    if (ran_) throw SimulationError("simulation already ran");
    ran_ = true;
    if (duration_ == 0) return;
    const SimTime end{duration_};
    schedule_blocking();
    if (scanner_) scanner_->start(end);
    for (auto& c : clients_) c->start(end);
    sched_.run_until(SimTime{duration_ - 1});
}

Host* Simulation::host(const std::string& name) {
    auto id = topo_.find(name);
    return id ? hosts_[*id].get() : nullptr;
}

std::map<std::string, std::string> Simulation::summary() const {
    std::map<std::string, std::string> m;
    std::map<EventKind, std::uint64_t> counts;
    std::uint64_t established_app = 0;
    for (const auto& r : log_.records()) {
        ++counts[r.kind];
        if (r.kind == EventKind::connection_established && r.value_or("layer") == "app") ++established_app;
    }
    for (int k = 0; k <= static_cast<int>(EventKind::connection_failed); ++k) {
        const auto kind = static_cast<EventKind>(k);
        m["records." + std::string(to_string(kind))] = std::to_string(counts[kind]);
    }
    m["scenario"] = scenario_.meta.name;
    m["seed"] = std::to_string(seed_);
    m["duration-s"] = std::to_string(duration_);
    m["events-executed"] = std::to_string(sched_.executed());
    m["segments-sent"] = std::to_string(net_.sent_count());
    m["connections-established-app"] = std::to_string(established_app);
    m["block-entries-final"] = std::to_string(table_.size());
    m["dpi.reports"] = std::to_string(gfc_->stats().reports);
    m["dpi.http-resets"] = std::to_string(gfc_->stats().http_resets);
    m["dpi.connect-resets"] = std::to_string(gfc_->stats().connect_resets);
    m["dpi.enforcement-drops"] = std::to_string(gfc_->stats().enforcement_drops);
    if (scanner_) {
        const auto& s = scanner_->stats();
        m["scanner.scans"] = std::to_string(s.scans);
        m["scanner.speaks-tor"] = std::to_string(s.speaks_tor);
        m["scanner.no-tor"] = std::to_string(s.no_tor);
        m["scanner.unreachable"] = std::to_string(s.unreachable);
        m["scanner.probes-connected"] = std::to_string(s.probes_connected);
        m["scanner.probes-unreachable"] = std::to_string(s.probes_unreachable);
        m["scanner.skipped-jobs"] = std::to_string(s.skipped_jobs);
        m["scanner.pool-exhaustions"] = std::to_string(pool_->exhaustions());
    }
    return m;
}

std::unique_ptr<Simulation> run_scenario(const scenario::Scenario& s, RunOptions opts) {
    auto sim = std::make_unique<Simulation>(s, opts);
    sim->run();
    return sim;
}

}  // namespace gfcsim::sim
