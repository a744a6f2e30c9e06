#include "gfcsim/simnet/event_log.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gfcsim/simnet/rng.hpp"

namespace gfcsim {

namespace {

constexpr std::array<std::string_view, 12> kKindNames = {
    "segment-sent",  "segment-dropped", "segment-delivered", "rst-injected",
    "scan-scheduled", "scan-started",   "scan-succeeded",    "scan-failed",
    "block-added",    "block-removed",  "connection-established", "connection-failed",
};

void escape_into(std::string& out, std::string_view v) {
    static constexpr char hex[] = "0123456789ABCDEF";
    for (unsigned char c : v) {
        if (c == '\t' || c == '\n' || c == '\r' || c == '%' || c == '=') {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xf];
        } else {
            out += static_cast<char>(c);
        }
    }
}

std::optional<std::string> unescape(std::string_view v) {
    std::string out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != '%') {
            out += v[i];
            continue;
        }
        if (i + 2 >= v.size()) return std::nullopt;
        unsigned value = 0;
        auto [p, ec] = std::from_chars(v.data() + i + 1, v.data() + i + 3, value, 16);
        if (ec != std::errc{} || p != v.data() + i + 3) return std::nullopt;
        out += static_cast<char>(value);
        i += 2;
    }
    return out;
}

}  // namespace

std::string_view to_string(EventKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<EventKind> parse_event_kind(std::string_view s) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == s) return static_cast<EventKind>(i);
    }
    return std::nullopt;
}

std::int64_t EventLogRecord::int_or(const std::string& key, std::int64_t fallback) const {
    auto* v = get(key);
    if (!v) return fallback;
    std::int64_t out = 0;
    auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    return ec == std::errc{} && p == v->data() + v->size() ? out : fallback;
}

void EventLog::emit(SimTime time, EventKind kind, Attributes attrs) {
    if (!records_.empty() && time < records_.back().time) {
        throw SimulationError("event log out of order at t=" + std::to_string(time.sec));
    }
    records_.push_back(EventLogRecord{time, kind, std::move(attrs)});
}

std::string EventLog::format(const EventLogRecord& r) {
    std::string line = std::to_string(r.time.sec);
    line += '\t';
    line += gfcsim::to_string(r.kind);
    for (const auto& [k, v] : r.attrs) {
        line += '\t';
        escape_into(line, k);
        line += '=';
        escape_into(line, v);
    }
    return line;
}

void EventLog::write(std::ostream& out) const {
    for (const auto& r : records_) out << format(r) << '\n';
}

std::string EventLog::to_string() const {
    std::ostringstream os;
    write(os);
    return os.str();
}

std::optional<EventLogRecord> EventLog::parse_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    if (fields.size() < 2) return std::nullopt;
    EventLogRecord r;
    auto [p, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), r.time.sec);
    if (ec != std::errc{} || p != fields[0].data() + fields[0].size() || r.time.sec < 0) return std::nullopt;
    auto kind = parse_event_kind(fields[1]);
    if (!kind) return std::nullopt;
    r.kind = *kind;
    for (std::size_t i = 2; i < fields.size(); ++i) {
        auto eq = fields[i].find('=');
        if (eq == std::string_view::npos) return std::nullopt;
        auto key = unescape(fields[i].substr(0, eq));
        auto value = unescape(fields[i].substr(eq + 1));
        if (!key || !value) return std::nullopt;
        r.attrs[*key] = *value;
    }
    return r;
}

std::vector<EventLogRecord> EventLog::parse(std::istream& in) {
    std::vector<EventLogRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto r = parse_line(line);
        if (!r) throw std::runtime_error("malformed event log line " + std::to_string(lineno));
        out.push_back(std::move(*r));
    }
    return out;
}

}  // namespace gfcsim
