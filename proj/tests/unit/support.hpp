#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "gfcsim/scenario/scenario.hpp"
#include "gfcsim/sim/simulation.hpp"
#include "gfcsim/simnet/event_log.hpp"

namespace testing {

inline gfcsim::scenario::Scenario bundled(const std::string& name) {
    return gfcsim::scenario::load_scenario_file(std::string(GFCSIM_SCENARIO_DIR) + "/" + name + ".yaml");
}

inline gfcsim::scenario::HostSpec& host_of(gfcsim::scenario::Scenario& s, const std::string& name) {
    for (auto& h : s.hosts) {
        if (h.name == name) return h;
    }
    throw std::out_of_range("no host " + name);
}

using Match = std::initializer_list<std::pair<const char*, const char*>>;

inline bool matches(const gfcsim::EventLogRecord& r, Match m) {
    return std::all_of(m.begin(), m.end(), [&](const auto& kv) { return r.value_or(kv.first) == kv.second; });
}

inline std::vector<gfcsim::EventLogRecord> select(const gfcsim::EventLog& log, gfcsim::EventKind kind, Match m = {}) {
    std::vector<gfcsim::EventLogRecord> out;
    for (const auto& r : log.records()) {
        if (r.kind == kind && matches(r, m)) out.push_back(r);
    }
    return out;
}

inline std::size_t count(const gfcsim::EventLog& log, gfcsim::EventKind kind, Match m = {}) {
    return select(log, kind, m).size();
}

inline std::unique_ptr<gfcsim::sim::Simulation> run(const gfcsim::scenario::Scenario& s,
                                                    gfcsim::sim::RunOptions o = {}) {
    return gfcsim::sim::run_scenario(s, o);
}

}  // namespace testing
