#include "gfcsim/sim/scanner_service.hpp"

namespace gfcsim::sim {

using blocktable::BlockMode;
using blocktable::BlockOrigin;
using blocktable::RevalidationResult;
using scanner::ScanOutcome;

std::string purpose_of(const scanner::ScanJob& job) {
    if (job.detect && job.revalidate) return "detect+revalidate";
    return job.detect ? "detect" : "revalidate";
}

ScannerService::ScannerService(SimContext& ctx, Host& host, const scenario::ScannerSpec& spec,
                               const dpi::DpiConfig& dpi, blocktable::BlockTable& table, scanner::ScanQueue& queue,
                               scanner::ScannerPool& pool)
    : ctx_(ctx), host_(host), spec_(spec), dpi_(dpi), table_(table), queue_(queue), pool_(pool) {
    host_.set_ping_responder([this](Address a, SimTime now) { return ping_ttl(a, now); });
    queue_.set_listener([this](const scanner::ScanJob& job, bool created) {
        if (created) log_job(job);
    });
}

void ScannerService::log_job(const scanner::ScanJob& job) {
    ctx_.log.emit(ctx_.now(), EventKind::scan_scheduled,
                  {{"cycle", std::to_string(job.scheduled_for.sec)},
                   {"delay", std::to_string(job.attempt_delay)},
                   {"detected-at", std::to_string(job.detected_at.sec)},
                   {"purpose", purpose_of(job)},
                   {"target", job.target.str()}});
}

bool ScannerService::owns(Address a) const {
    auto o = ctx_.topo.owner(a);
    return o && *o == host_.id();
}

std::optional<std::uint8_t> ScannerService::ping_ttl(Address a, SimTime now) const {
    auto it = addresses_.find(a);
    if (it == addresses_.end()) return std::nullopt;
    const auto& s = it->second;
    if (s.leases > 0 || !s.live || now < s.live_from) return std::nullopt;
    return static_cast<std::uint8_t>(spec_.initial_ttl + s.delta);
}

void ScannerService::start(SimTime end) {
    const SimTime first = next_multiple(SimTime{0}, queue_.period());
    if (first < end) ctx_.sched.schedule(first, [this, first, end] { drain(first, end); });
}

void ScannerService::drain(SimTime cycle, SimTime end) {
    if (dpi_.enabled_at(cycle)) {
        for (const auto& t : table_.due_for_revalidation(cycle)) queue_.add_revalidation(t, cycle);
        for (const auto& job : queue_.drain(cycle)) {
            ctx_.sched.schedule(job.start(), [this, job] { execute(job); });
        }
    } else {
        stats_.skipped_jobs += queue_.drain(cycle).size();
    }
    const SimTime next = cycle + queue_.period();
    if (next < end) ctx_.sched.schedule(next, [this, next, end] { drain(next, end); });
}

ScannerService::Run* ScannerService::find(std::uint64_t id) {
    auto it = runs_.find(id);
    return it == runs_.end() ? nullptr : it->second.get();
}

void ScannerService::execute(const scanner::ScanJob& job) {
    auto run = std::make_unique<Run>();
    run->id = ++stats_.scans;
    run->job = job;
    run->source = pool_.pick_source();
    const auto id = run->id;
    auto& addr = addresses_[run->source.address];
    ++addr.leases;
    addr.live = false;

    ctx_.log.emit(ctx_.now(), EventKind::scan_started,
                  {{"as", run->source.as_label},
                   {"cycle", std::to_string(job.scheduled_for.sec)},
                   {"delay", std::to_string(job.attempt_delay)},
                   {"master", run->source.master ? "1" : "0"},
                   {"purpose", purpose_of(job)},
                   {"recycled", run->source.recycled ? "1" : "0"},
                   {"scan", std::to_string(id)},
                   {"source", run->source.address.str()},
                   {"target", job.target.str()}});

    if (job.detect) {
        run->hs = std::make_unique<protocol::HandshakeMachine>(protocol::HandshakeRole::scanner_client,
                                                               protocol::Transport::plain_tor);
        run->hs->on_connect_started();
    }
    const Tuple local{run->source.address, host_.next_port(run->source.address, job.target)};
    auto* raw = run.get();
    runs_[id] = std::move(run);

    ConnectOptions opts;
    opts.syn_retries = spec_.syn_retries;
    opts.rto_base = spec_.syn_rto;
    opts.backoff_multiplier = spec_.backoff_multiplier;
    TcpCallbacks cb;
    cb.on_established = [this, id](ConnId) { on_established(id); };
    cb.on_data = [this, id](ConnId, std::span<const std::uint8_t> d) { on_data(id, d); };
    cb.on_failed = [this, id](ConnId, std::string_view) {
        if (auto* r = find(id)) finish(id, r->connected ? ScanOutcome::no_tor : ScanOutcome::unreachable);
    };
    cb.on_closed = [this, id](ConnId) {
        if (auto* r = find(id)) finish(id, r->connected ? ScanOutcome::no_tor : ScanOutcome::unreachable);
    };
    raw->conn = host_.tcp().connect(local, job.target, std::move(cb), opts);
    ctx_.sched.schedule_in(spec_.handshake_timeout, [this, id] {
        if (auto* r = find(id)) finish(id, r->connected ? ScanOutcome::no_tor : ScanOutcome::unreachable);
    });
}

void ScannerService::on_established(std::uint64_t id) {
    auto* r = find(id);
    if (!r) return;
    r->connected = true;
    if (!r->hs) {
        finish(id, ScanOutcome::no_tor);
        return;
    }
    host_.tcp().send(r->conn, r->hs->on_tcp_established());
}

void ScannerService::on_data(std::uint64_t id, std::span<const std::uint8_t> data) {
    auto* r = find(id);
    if (!r || !r->hs) return;
    auto out = r->hs->drive(data);
    if (!out.empty()) host_.tcp().send(r->conn, out);
    if (r->hs->phase() == protocol::Phase::tor_established) finish(id, ScanOutcome::speaks_tor);
    else if (r->hs->phase() == protocol::Phase::failed) finish(id, ScanOutcome::no_tor);
}

void ScannerService::finish(std::uint64_t id, ScanOutcome outcome) {
    auto node = runs_.extract(id);
    if (node.empty()) return;
    Run& r = *node.mapped();
    const SimTime now = ctx_.now();
    auto& tcp = host_.tcp();
    if (tcp.state(r.conn)) {
        if (r.connected) tcp.close(r.conn);
        else tcp.abort(r.conn);
    }

    auto& addr = addresses_[r.source.address];
    --addr.leases;
    const auto artifact = scanner::draw_spoof_artifact(spec_.spoof, ctx_.rng.stream(RngStreams::kSpoof));
    addr.live = artifact.live;
    addr.live_from = now + artifact.onset;
    addr.delta = artifact.ttl_delta;

    // A pure revalidation is a connect probe; its outcome is the TCP result.
    const bool probe_only = !r.job.detect;
    if (probe_only) {
        ++(r.connected ? stats_.probes_connected : stats_.probes_unreachable);
    } else {
        switch (outcome) {
            case ScanOutcome::speaks_tor: ++stats_.speaks_tor; break;
            case ScanOutcome::no_tor: ++stats_.no_tor; break;
            case ScanOutcome::unreachable: ++stats_.unreachable; break;
        }
    }
    const bool success = probe_only ? r.connected : outcome == ScanOutcome::speaks_tor;
    std::string label = probe_only ? (r.connected ? "connected" : "unreachable") : scanner::to_string(outcome);
    ctx_.log.emit(now, success ? EventKind::scan_succeeded : EventKind::scan_failed,
                  {{"outcome", label},
                   {"purpose", purpose_of(r.job)},
                   {"scan", std::to_string(r.id)},
                   {"source", r.source.address.str()},
                   {"target", r.job.target.str()}});

    if (r.job.revalidate) {
        const auto* entry = table_.find(r.job.target, BlockMode::synack_drop);
        const auto added = entry ? entry->added_at : SimTime{};
        const auto streak = entry && entry->failure_streak_started ? *entry->failure_streak_started : r.job.scheduled_for;
        if (table_.revalidate(r.job.target, r.job.scheduled_for, r.connected) == RevalidationResult::removed) {
            ctx_.log.emit(now, EventKind::block_removed,
                          {{"added-at", std::to_string(added.sec)},
                           {"cycle", std::to_string(r.job.scheduled_for.sec)},
                           {"mode", blocktable::to_string(BlockMode::synack_drop)},
                           {"reason", "expired"},
                           {"scan", std::to_string(r.id)},
                           {"streak-start", std::to_string(streak.sec)},
                           {"target", r.job.target.str()}});
        }
    }
    if (r.job.detect && outcome == ScanOutcome::speaks_tor) {
        const auto* existing = table_.find(r.job.target, BlockMode::synack_drop);
        const bool fresh = !existing || existing->origin != BlockOrigin::scan;
        table_.add(r.job.target, BlockMode::synack_drop, BlockOrigin::scan, now, r.job.scheduled_for);
        if (fresh) {
            ctx_.log.emit(now, EventKind::block_added,
                          {{"mode", blocktable::to_string(BlockMode::synack_drop)},
                           {"origin", blocktable::to_string(BlockOrigin::scan)},
                           {"scan", std::to_string(r.id)},
                           {"target", r.job.target.str()}});
        }
    }
}

}  // namespace gfcsim::sim
