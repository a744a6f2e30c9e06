#pragma once

#include <functional>
#include <map>
#include <vector>

#include "gfcsim/dpi/dpi.hpp"
#include "gfcsim/scanner/load_curve.hpp"
#include "gfcsim/simnet/address.hpp"
#include "gfcsim/simnet/rng.hpp"

namespace gfcsim::scanner {

struct ScanJob {
    Tuple target;
    SimTime detected_at;
    SimTime scheduled_for;  // always a multiple of the queue period
    Seconds attempt_delay = 0;
    bool detect = false;      // queued because DPI reported the tuple
    bool revalidate = false;  // queued to re-check an existing block

    SimTime start() const { return scheduled_for + attempt_delay; }
};

/// Pending scan jobs keyed by the queue drain they belong to. Repeated reports
/// of a tuple before its drain collapse into one job.
class ScanQueue : public dpi::DetectionSink {
public:
    using Listener = std::function<void(const ScanJob&, bool created)>;

    ScanQueue(LoadCurve load, RngStream& delays, Seconds period = kQueuePeriod)
        : load_(load), delays_(delays), period_(period) {}

    /// Schedules `tuple` for the first drain strictly after `detected_at`.
    ScanJob enqueue(const Tuple& tuple, SimTime detected_at);
    /// Adds (or marks) a revalidation job for the drain at `cycle`.
    ScanJob add_revalidation(const Tuple& tuple, SimTime cycle);
    /// Removes and returns every job for the drain at `cycle`, ordered by tuple.
    std::vector<ScanJob> drain(SimTime cycle);

    void report(const Tuple& target, SimTime now) override { enqueue(target, now); }

    void set_listener(Listener l) { listener_ = std::move(l); }
    std::size_t pending() const;
    const LoadCurve& load() const { return load_; }
    Seconds period() const { return period_; }

private:
    ScanJob& upsert(const Tuple& tuple, SimTime cycle, SimTime detected_at, bool& created);

    LoadCurve load_;
    RngStream& delays_;
    Seconds period_;
    std::map<SimTime, std::map<Tuple, ScanJob>> jobs_;
    Listener listener_;
};

}  // namespace gfcsim::scanner
