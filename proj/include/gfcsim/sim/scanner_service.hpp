#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>

#include "gfcsim/blocktable/block_table.hpp"
#include "gfcsim/dpi/dpi.hpp"
#include "gfcsim/protocol/handshake.hpp"
#include "gfcsim/scanner/scan_queue.hpp"
#include "gfcsim/scanner/scanner_pool.hpp"
#include "gfcsim/scanner/ttl_spoof.hpp"
#include "gfcsim/scenario/scenario.hpp"
#include "gfcsim/sim/host.hpp"

namespace gfcsim::sim {

/// Runs the active-probing side: drains the queue every period, executes
/// scans from pool addresses, maintains block entries, and leaves the
/// spoofed-address artifacts behind.
class ScannerService {
public:
    struct Stats {
        std::uint64_t scans = 0;
        std::uint64_t speaks_tor = 0;
        std::uint64_t no_tor = 0;
        std::uint64_t unreachable = 0;
        std::uint64_t probes_connected = 0;
        std::uint64_t probes_unreachable = 0;
        std::uint64_t skipped_jobs = 0;  // drained while the censor was down
    };

    ScannerService(SimContext& ctx, Host& host, const scenario::ScannerSpec& spec, const dpi::DpiConfig& dpi,
                   blocktable::BlockTable& table, scanner::ScanQueue& queue, scanner::ScannerPool& pool);
    ScannerService(const ScannerService&) = delete;
    ScannerService& operator=(const ScannerService&) = delete;

    void start(SimTime end);
    bool owns(Address a) const;
    /// Echo-reply policy for pool addresses.
    std::optional<std::uint8_t> ping_ttl(Address a, SimTime now) const;

    const Stats& stats() const { return stats_; }

private:
    struct AddressState {
        int leases = 0;
        bool live = false;
        SimTime live_from;
        int delta = 0;
    };
    struct Run {
        std::uint64_t id = 0;
        scanner::ScanJob job;
        scanner::SourcePick source;
        ConnId conn = 0;
        std::unique_ptr<protocol::HandshakeMachine> hs;
        bool connected = false;
        bool done = false;
    };

    void drain(SimTime cycle, SimTime end);
    void execute(const scanner::ScanJob& job);
    void on_established(std::uint64_t id);
    void on_data(std::uint64_t id, std::span<const std::uint8_t> data);
    void finish(std::uint64_t id, scanner::ScanOutcome outcome);
    void log_job(const scanner::ScanJob& job);
    Run* find(std::uint64_t id);

    SimContext& ctx_;
    Host& host_;
    const scenario::ScannerSpec& spec_;
    const dpi::DpiConfig& dpi_;
    blocktable::BlockTable& table_;
    scanner::ScanQueue& queue_;
    scanner::ScannerPool& pool_;
    std::unordered_map<Address, AddressState> addresses_;
    std::map<std::uint64_t, std::unique_ptr<Run>> runs_;
    Stats stats_;
};

std::string purpose_of(const scanner::ScanJob& job);

}  // namespace gfcsim::sim
