#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfcsim/simnet/event_log.hpp"
#include "gfcsim/simnet/rng.hpp"
#include "gfcsim/simnet/scheduler.hpp"
#include "gfcsim/simnet/segment.hpp"
#include "gfcsim/simnet/topology.hpp"

namespace gfcsim {

class SegmentSink {
public:
    virtual ~SegmentSink() = default;
    virtual void receive(const Segment& seg) = 0;
};

/// Where on its path a segment meets a censor link.
struct BorderContext {
    const Link& link;
    HostId src_host;
    HostId dst_host;
    Seconds delay_to_src;  // from the censor link back to the sender
    Seconds delay_to_dst;  // from the censor link on to the receiver
    int hops_to_src;
    int hops_to_dst;
};

enum class BorderAction : std::uint8_t { pass, drop };

/// Censor middlebox attached to links flagged `gfc`.
class BorderInspector {
public:
    virtual ~BorderInspector() = default;
    virtual BorderAction on_border(const Segment& seg, const BorderContext& ctx) = 0;
};

/// Segment delivery over the topology. Every segment handed to send() ends in
/// exactly one of: delivered, dropped (loss | enforcement | no-route | expired).
class Network {
public:
    Network(Scheduler& sched, RngStreams& rng, EventLog& log, Topology& topo)
        : sched_(sched), rng_(rng), log_(log), topo_(topo) {}

    void attach(HostId host, SegmentSink* sink);
    void set_inspector(BorderInspector* inspector) { inspector_ = inspector; }
    void set_segment_logging(bool on) { log_segments_ = on; }

    /// `seg.ttl` is the sender's initial ttl; the receiver sees it minus the path hop count.
    void send(HostId from, Segment seg);

    /// Delivers a forged segment (e.g. an injected RST) to `to` after `delay`.
    /// `hops` is the distance from the injection point, used for ttl.
    void inject(Segment seg, HostId to, Seconds delay, int hops);

    Topology& topology() { return topo_; }
    Scheduler& scheduler() { return sched_; }
    EventLog& log() { return log_; }
    SimTime now() const { return sched_.now(); }

    std::uint64_t sent_count() const { return sent_; }

    static Attributes describe(const Segment& seg);

private:
    void drop(const Segment& seg, const char* reason);
    void deliver_at(Seconds delay, HostId to, Segment seg);

    Scheduler& sched_;
    RngStreams& rng_;
    EventLog& log_;
    Topology& topo_;
    std::vector<SegmentSink*> sinks_;
    BorderInspector* inspector_ = nullptr;
    bool log_segments_ = true;
    std::uint64_t next_id_ = 1;
    std::uint64_t sent_ = 0;
};

}  // namespace gfcsim
