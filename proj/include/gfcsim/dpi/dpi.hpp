#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gfcsim/simnet/address.hpp"
#include "gfcsim/simnet/segment.hpp"
#include "gfcsim/simnet/time.hpp"
#include "gfcsim/simnet/window.hpp"

namespace gfcsim::dpi {

struct DpiConfig {
    std::set<Direction> inspect_directions{Direction::egress};
    std::vector<std::string> http_block_hosts{"torproject.org"};
    /// Leading tokens that switch the matcher to its HTTP rule set.
    std::vector<std::string> http_method_tokens{"GET ", "POST ", "HEAD "};
    /// Periods when the inspection boxes are down.
    std::vector<TimeWindow> disabled;

    bool enabled_at(SimTime t) const { return !any_contains(disabled, t); }
};

enum class VerdictKind { pass, report_tor, inject_rst, drop };

struct Verdict {
    VerdictKind kind = VerdictKind::pass;
    /// Destination tuple of the inspected segment, set for report_tor.
    Tuple target;

    static Verdict pass() { return {}; }
};

/// Classifies one segment in isolation. There is no stream reassembly: the
/// Tor rule fires only if the whole cipher list sits inside this payload.
Verdict inspect(const Segment& seg, const DpiConfig& cfg, SimTime now);

bool starts_with_http_method(const Bytes& payload, const DpiConfig& cfg);
/// Exact `Host: <h>` header line match against the blocked host list.
bool has_blocked_host(const Bytes& payload, const DpiConfig& cfg);

/// Forged resets for a connection carrying `trigger`: `.first` goes to the
/// trigger's sender (spoofed from its receiver), `.second` to its receiver.
std::pair<Segment, Segment> make_rst_pair(const Segment& trigger);

/// Receiver of Tor detections (the scanner queue).
class DetectionSink {
public:
    virtual ~DetectionSink() = default;
    virtual void report(const Tuple& target, SimTime now) = 0;
};

inline void report_tor(DetectionSink& sink, const Tuple& target, SimTime now) { sink.report(target, now); }

}  // namespace gfcsim::dpi
