#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfcsim/simnet/time.hpp"

namespace gfcsim {

enum class EventKind {
    segment_sent,
    segment_dropped,
    segment_delivered,
    rst_injected,
    scan_scheduled,
    scan_started,
    scan_succeeded,
    scan_failed,
    block_added,
    block_removed,
    connection_established,
    connection_failed,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

/// Keys iterate in lexicographic order, which is also the serialised order.
using Attributes = std::map<std::string, std::string>;

struct EventLogRecord {
    SimTime time;
    EventKind kind;
    Attributes attrs;

    const std::string* get(const std::string& key) const {
        auto it = attrs.find(key);
        return it == attrs.end() ? nullptr : &it->second;
    }
    std::string value_or(const std::string& key, std::string fallback = {}) const {
        auto* v = get(key);
        return v ? *v : fallback;
    }
    std::int64_t int_or(const std::string& key, std::int64_t fallback = 0) const;
};

/// Append-only record of a run. Line format:
///   <time>\t<kind>\t<key>=<value>\t...
/// with keys sorted. Tabs, newlines, '%' and '=' inside values are
/// percent-escaped so every record stays on one line.
class EventLog {
public:
    /// Throws SimulationError if `time` precedes the last record.
    void emit(SimTime time, EventKind kind, Attributes attrs);

    const std::vector<EventLogRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    void write(std::ostream& out) const;
    std::string to_string() const;

    static std::string format(const EventLogRecord& r);
    /// Parses one line; nullopt on malformed input.
    static std::optional<EventLogRecord> parse_line(std::string_view line);
    /// Parses a whole log; throws std::runtime_error naming the bad line.
    static std::vector<EventLogRecord> parse(std::istream& in);

private:
    std::vector<EventLogRecord> records_;
};

}  // namespace gfcsim
