#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string_view>

#include "gfcsim/scenario/scenario.hpp"

namespace gfcsim::scenario {
namespace {

class Loader {
public:
    explicit Loader(std::string origin) : origin_(std::move(origin)) {}

    Scenario load(const YAML::Node& root);

private:
    [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
        const int line = at.IsDefined() && at.Mark().line >= 0 ? at.Mark().line + 1 : 0;
        throw ScenarioError(origin_ + ":" + std::to_string(line) + ": " + msg, line);
    }

    void expect_map(const YAML::Node& n, const std::string& what) const {
        if (!n.IsMap()) fail(n, what + " must be a mapping");
    }
    void expect_seq(const YAML::Node& n, const std::string& what) const {
        if (!n.IsSequence()) fail(n, what + " must be a list");
    }

    void check_keys(const YAML::Node& map, const std::string& section,
                    std::initializer_list<std::string_view> allowed) const {
        expect_map(map, section);
        for (const auto& kv : map) {
            const auto key = kv.first.as<std::string>();
            bool ok = false;
            for (auto a : allowed) ok = ok || a == key;
            if (!ok) fail(kv.first, "unknown key '" + key + "' in " + section);
        }
    }

    template <class T>
    T as(const YAML::Node& n, const std::string& what) const {
        if (!n.IsScalar()) fail(n, what + " must be a scalar");
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            fail(n, "cannot read " + what + " from '" + n.Scalar() + "'");
        }
    }

    template <class T>
    void opt(const YAML::Node& map, const char* key, T& out) const {
        if (auto n = map[key]) out = as<T>(n, key);
    }

    void opt_seconds(const YAML::Node& map, const char* key, Seconds& out, Seconds min = 0) const {
        if (auto n = map[key]) {
            out = as<Seconds>(n, key);
            if (out < min) fail(n, std::string(key) + " must be at least " + std::to_string(min));
        }
    }
    void opt_time(const YAML::Node& map, const char* key, SimTime& out) const {
        Seconds s = out.sec;
        opt_seconds(map, key, s);
        out = SimTime{s};
    }
    void opt_fraction(const YAML::Node& map, const char* key, double& out) const {
        if (auto n = map[key]) {
            out = as<double>(n, key);
            if (!(out >= 0.0 && out <= 1.0)) fail(n, std::string(key) + " must be in [0, 1]");
        }
    }
    template <class T>
    void opt_int_range(const YAML::Node& map, const char* key, T& out, std::int64_t lo, std::int64_t hi) const {
        if (auto n = map[key]) {
            const auto v = as<std::int64_t>(n, key);
            if (v < lo || v > hi)
                fail(n, std::string(key) + " must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            out = static_cast<T>(v);
        }
    }

    Address address(const YAML::Node& n, const std::string& what) const {
        auto a = Address::parse(as<std::string>(n, what));
        if (!a) fail(n, what + " is not a dotted-quad address: '" + n.Scalar() + "'");
        return *a;
    }
    Tuple tuple(const YAML::Node& n, const std::string& what) const {
        auto t = Tuple::parse(as<std::string>(n, what));
        if (!t) fail(n, what + " is not an address:port tuple: '" + n.Scalar() + "'");
        return *t;
    }

    std::vector<TimeWindow> windows(const YAML::Node& n, const std::string& what) const {
        expect_seq(n, what);
        std::vector<TimeWindow> out;
        for (const auto& w : n) {
            check_keys(w, what, {"from-s", "to-s"});
            if (!w["from-s"] || !w["to-s"]) fail(w, what + " entries need from-s and to-s");
            TimeWindow tw;
            opt_time(w, "from-s", tw.from);
            opt_time(w, "to-s", tw.to);
            if (tw.to < tw.from) fail(w, what + " window ends before it starts");
            out.push_back(tw);
        }
        return out;
    }

    void meta(const YAML::Node& n, Meta& m) const;
    HostSpec host(const YAML::Node& n) const;
    TcpParams tcp(const YAML::Node& n, TcpParams p) const;
    ServiceSpec service(const YAML::Node& n) const;
    RelaySetSpec relay_set(const YAML::Node& n) const;
    LinkSpec link(const YAML::Node& n) const;
    void dpi(const YAML::Node& n, dpi::DpiConfig& cfg) const;
    void scanner(const YAML::Node& n, ScannerSpec& s) const;
    void blocking(const YAML::Node& n, BlockingSpec& b) const;
    ClientSpec client(const YAML::Node& n) const;
    void validate(const YAML::Node& root, Scenario& s) const;

    std::string origin_;
};

Region parse_region(std::string_view s, bool& ok) {
    ok = true;
    if (s == "inside-china") return Region::inside_china;
    if (s == "outside-china") return Region::outside_china;
    ok = false;
    return Region::outside_china;
}

void Loader::meta(const YAML::Node& n, Meta& m) const {
    check_keys(n, "meta", {"name", "description", "duration-s", "seed", "log-segments"});
    opt(n, "name", m.name);
    opt(n, "description", m.description);
    opt_seconds(n, "duration-s", m.duration);
    opt(n, "seed", m.seed);
    opt(n, "log-segments", m.log_segments);
}

TcpParams Loader::tcp(const YAML::Node& n, TcpParams p) const {
    check_keys(n, "tcp", {"initial-ttl", "mss", "window", "syn-retries", "data-retries", "rto-base-s",
                          "backoff-multiplier"});
    opt_int_range(n, "initial-ttl", p.initial_ttl, 1, 255);
    opt_int_range(n, "mss", p.mss, 1, 65535);
    opt_int_range(n, "window", p.window, 1, 65535);
    opt_int_range(n, "syn-retries", p.syn_retries, 0, 16);
    opt_int_range(n, "data-retries", p.data_retries, 0, 16);
    opt_seconds(n, "rto-base-s", p.rto_base, 1);
    opt_int_range(n, "backoff-multiplier", p.backoff_multiplier, 1, 16);
    return p;
}

ServiceSpec Loader::service(const YAML::Node& n) const {
    check_keys(n, "service", {"port", "kind", "transport", "session-key"});
    ServiceSpec s;
    if (!n["port"]) fail(n, "service needs a port");
    opt_int_range(n, "port", s.port, 1, 65535);
    if (auto k = n["kind"]) {
        const auto v = as<std::string>(k, "kind");
        bool found = false;
        for (auto kind : {ServiceKind::tor_bridge, ServiceKind::tor_relay, ServiceKind::http, ServiceKind::https,
                          ServiceKind::echo, ServiceKind::dir_authority}) {
            if (v == to_string(kind)) {
                s.kind = kind;
                found = true;
            }
        }
        if (!found) fail(k, "unknown service kind '" + v + "'");
    }
    if (auto t = n["transport"]) {
        auto tr = protocol::parse_transport(as<std::string>(t, "transport"));
        if (!tr || *tr == protocol::Transport::http || *tr == protocol::Transport::spa_guarded)
            fail(t, "service transport must be plain-tor or obfuscated");
        s.transport = *tr;
    }
    opt(n, "session-key", s.session_key);
    if (s.transport == protocol::Transport::obfuscated && s.session_key.empty())
        fail(n, "obfuscated service needs a session-key");
    return s;
}

HostSpec Loader::host(const YAML::Node& n) const {
    check_keys(n, "host", {"name", "region", "addresses", "roles", "tcp", "services", "fragment", "guard", "spa",
                           "whitelist", "offline", "observe-scanners"});
    HostSpec h;
    if (!n["name"]) fail(n, "host needs a name");
    opt(n, "name", h.name);
    if (auto r = n["region"]) {
        bool ok;
        h.region = parse_region(as<std::string>(r, "region"), ok);
        if (!ok) fail(r, "region must be inside-china or outside-china");
    }
    if (auto a = n["addresses"]) {
        expect_seq(a, "addresses");
        for (const auto& x : a) h.addresses.push_back(address(x, "address"));
    }
    if (auto r = n["roles"]) {
        expect_seq(r, "roles");
        for (const auto& x : r) {
            const auto v = as<std::string>(x, "role");
            bool found = false;
            for (auto role : {Role::client, Role::bridge, Role::relay, Role::dir_authority, Role::web_server,
                              Role::scanner_pool, Role::router}) {
                if (v == to_string(role)) {
                    h.roles.insert(role);
                    found = true;
                }
            }
            if (!found) fail(x, "unknown role '" + v + "'");
        }
    }
    if (auto t = n["tcp"]) h.tcp = tcp(t, h.tcp);
    if (auto s = n["services"]) {
        expect_seq(s, "services");
        for (const auto& x : s) h.services.push_back(service(x));
    }
    if (auto f = n["fragment"]) {
        check_keys(f, "fragment", {"mss-override"});
        evasion::FragmentPolicy p;
        opt_int_range(f, "mss-override", p.mss_override, 1, 65535);
        h.fragment = p;
    }
    if (auto g = n["guard"]) {
        check_keys(g, "guard", {"syn-accept-index", "deaf-window-s", "synack-window-override", "idle-reset-s"});
        evasion::GuardPolicy p;
        opt_int_range(g, "syn-accept-index", p.syn_accept_index, 1, 64);
        opt_seconds(g, "deaf-window-s", p.deaf_window);
        opt_seconds(g, "idle-reset-s", p.idle_reset);
        if (auto w = g["synack-window-override"]) {
            const auto v = as<std::int64_t>(w, "synack-window-override");
            if (v == 0) fail(w, "synack-window-override 0 would stall every connection");
            if (v < 0 || v > 65535) fail(w, "synack-window-override must be in [1, 65535]");
            p.synack_window_override = static_cast<std::uint16_t>(v);
        }
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            fail(g, e.what());
        }
        h.guard = p;
    }
    if (auto s = n["spa"]) {
        check_keys(s, "spa", {"shared-secret", "auth-validity-s"});
        evasion::SpaPolicy p;
        std::string secret;
        opt(s, "shared-secret", secret);
        p.shared_secret = protocol::to_bytes(secret);
        opt_seconds(s, "auth-validity-s", p.auth_validity, 1);
        if (p.shared_secret.empty()) fail(s, "spa needs a non-empty shared-secret");
        h.spa = p;
    }
    if (auto w = n["whitelist"]) {
        check_keys(w, "whitelist", {"from-s", "allow"});
        WhitelistSpec ws;
        opt_time(w, "from-s", ws.from);
        if (auto a = w["allow"]) {
            expect_seq(a, "allow");
            for (const auto& x : a) ws.allow.push_back(address(x, "allowed address"));
        }
        h.whitelist = ws;
    }
    if (auto o = n["offline"]) h.offline = windows(o, "offline");
    opt(n, "observe-scanners", h.observe_scanners);
    return h;
}

RelaySetSpec Loader::relay_set(const YAML::Node& n) const {
    check_keys(n, "relay set", {"name", "host", "count", "first-address", "port"});
    RelaySetSpec r;
    if (!n["name"] || !n["host"] || !n["first-address"]) fail(n, "relay set needs name, host and first-address");
    opt(n, "name", r.name);
    opt(n, "host", r.host);
    opt_int_range(n, "count", r.count, 0, 1 << 20);
    r.first_address = address(n["first-address"], "first-address");
    opt_int_range(n, "port", r.port, 1, 65535);
    return r;
}

LinkSpec Loader::link(const YAML::Node& n) const {
    check_keys(n, "link", {"a", "b", "delay-s", "loss-probability", "hop-count", "border", "dpi"});
    LinkSpec l;
    if (!n["a"] || !n["b"]) fail(n, "link needs endpoints a and b");
    opt(n, "a", l.a);
    opt(n, "b", l.b);
    opt_seconds(n, "delay-s", l.delay);
    opt_fraction(n, "loss-probability", l.loss);
    opt_int_range(n, "hop-count", l.hop_count, 1, 255);
    opt(n, "border", l.border);
    opt(n, "dpi", l.dpi);
    if (l.dpi && !l.border) fail(n, "dpi may only be attached to a border link");
    return l;
}

void Loader::dpi(const YAML::Node& n, dpi::DpiConfig& cfg) const {
    check_keys(n, "dpi", {"inspect-directions", "http-block-hosts", "http-method-tokens", "disabled"});
    if (auto d = n["inspect-directions"]) {
        expect_seq(d, "inspect-directions");
        cfg.inspect_directions.clear();
        for (const auto& x : d) {
            const auto v = as<std::string>(x, "direction");
            if (v == "egress") cfg.inspect_directions.insert(Direction::egress);
            else if (v == "ingress") cfg.inspect_directions.insert(Direction::ingress);
            else if (v == "domestic") cfg.inspect_directions.insert(Direction::domestic);
            else fail(x, "unknown direction '" + v + "'");
        }
    }
    if (auto h = n["http-block-hosts"]) {
        expect_seq(h, "http-block-hosts");
        cfg.http_block_hosts.clear();
        for (const auto& x : h) cfg.http_block_hosts.push_back(as<std::string>(x, "host"));
    }
    if (auto t = n["http-method-tokens"]) {
        expect_seq(t, "http-method-tokens");
        cfg.http_method_tokens.clear();
        for (const auto& x : t) {
            auto v = as<std::string>(x, "token");
            if (v.empty()) fail(x, "http method tokens must not be empty");
            cfg.http_method_tokens.push_back(v);
        }
    }
    if (auto d = n["disabled"]) cfg.disabled = windows(d, "dpi.disabled");
}

void Loader::scanner(const YAML::Node& n, ScannerSpec& s) const {
    check_keys(n, "scanner", {"host", "pool", "load-curve", "ttl-spoof", "syn-retries", "syn-rto-s",
                              "backoff-multiplier", "initial-ttl", "handshake-timeout-s"});
    s.enabled = true;
    if (!n["host"]) fail(n, "scanner needs a host");
    opt(n, "host", s.host);
    opt_int_range(n, "syn-retries", s.syn_retries, 0, 16);
    opt_seconds(n, "syn-rto-s", s.syn_rto, 1);
    opt_int_range(n, "backoff-multiplier", s.backoff_multiplier, 1, 16);
    opt_int_range(n, "initial-ttl", s.initial_ttl, 1, 255);
    opt_seconds(n, "handshake-timeout-s", s.handshake_timeout, 1);
    if (auto p = n["pool"]) {
        check_keys(p, "scanner.pool", {"master-address", "master-as", "master-probability", "pool-size",
                                       "first-pool-address", "as-weights"});
        if (auto m = p["master-address"]) s.pool.master_address = address(m, "master-address");
        opt(p, "master-as", s.pool.master_as);
        opt_fraction(p, "master-probability", s.pool.master_probability);
        opt_int_range(p, "pool-size", s.pool.pool_size, 1, 1 << 24);
        if (auto f = p["first-pool-address"]) s.pool.first_pool_address = address(f, "first-pool-address");
        if (auto w = p["as-weights"]) {
            expect_seq(w, "as-weights");
            s.pool.as_weights.clear();
            double sum = 0;
            for (const auto& x : w) {
                check_keys(x, "as-weights entry", {"as", "weight"});
                scanner::AsWeight aw;
                opt(x, "as", aw.label);
                opt_fraction(x, "weight", aw.weight);
                sum += aw.weight;
                s.pool.as_weights.push_back(aw);
            }
            if (s.pool.as_weights.empty() || std::abs(sum - 1.0) > 1e-9) fail(w, "as-weights must sum to 1");
        }
    }
    if (auto l = n["load-curve"]) {
        check_keys(l, "scanner.load-curve", {"shape", "max-extra-delay-s", "peak-hour", "period-s"});
        if (auto sh = l["shape"]) {
            const auto v = as<std::string>(sh, "shape");
            if (v == "flat") s.load.shape = scanner::LoadCurve::Shape::flat;
            else if (v == "raised-cosine") s.load.shape = scanner::LoadCurve::Shape::raised_cosine;
            else fail(sh, "load-curve shape must be flat or raised-cosine");
        }
        opt_seconds(l, "max-extra-delay-s", s.load.max_extra_delay);
        opt(l, "peak-hour", s.load.peak_hour);
        opt_seconds(l, "period-s", s.load.period, 1);
        if (s.load.peak_hour < 0 || s.load.peak_hour >= 24) fail(l, "peak-hour must be in [0, 24)");
    }
    if (auto t = n["ttl-spoof"]) {
        check_keys(t, "scanner.ttl-spoof", {"live-probability", "onset-min-minutes", "onset-max-minutes",
                                            "typical-delta", "outlier-probability", "outlier-deltas"});
        opt_fraction(t, "live-probability", s.spoof.live_probability);
        opt_int_range(t, "onset-min-minutes", s.spoof.onset_min_minutes, 0, 1440);
        opt_int_range(t, "onset-max-minutes", s.spoof.onset_max_minutes, 0, 1440);
        opt_int_range(t, "typical-delta", s.spoof.typical_delta, 0, 255);
        opt_fraction(t, "outlier-probability", s.spoof.outlier_probability);
        if (auto d = t["outlier-deltas"]) {
            expect_seq(d, "outlier-deltas");
            s.spoof.outlier_deltas.clear();
            for (const auto& x : d) {
                const auto v = as<int>(x, "outlier delta");
                if (v < 0 || v > 255) fail(x, "outlier delta must be in [0, 255]");
                s.spoof.outlier_deltas.push_back(v);
            }
        }
        if (s.spoof.onset_min_minutes > s.spoof.onset_max_minutes) fail(t, "onset-min-minutes exceeds onset-max-minutes");
    }
    int max_delta = s.spoof.typical_delta;
    for (int d : s.spoof.outlier_deltas) max_delta = std::max(max_delta, d);
    if (s.initial_ttl + max_delta > 255) fail(n, "scanner initial-ttl plus the largest ttl delta exceeds 255");
}

void Loader::blocking(const YAML::Node& n, BlockingSpec& b) const {
    check_keys(n, "blocking", {"policy", "static-blacklist", "dir-authorities", "consensus"});
    if (auto p = n["policy"]) {
        check_keys(p, "blocking.policy", {"expiry-threshold-s", "revalidation-period-s", "consensus-ingest-period-s",
                                          "consensus-miss-rate"});
        opt_seconds(p, "expiry-threshold-s", b.policy.expiry_threshold);
        opt_seconds(p, "revalidation-period-s", b.policy.revalidation_period, 1);
        opt_seconds(p, "consensus-ingest-period-s", b.policy.consensus_ingest_period, 1);
        opt_fraction(p, "consensus-miss-rate", b.policy.consensus_miss_rate);
        if (b.policy.expiry_threshold % b.policy.revalidation_period != 0)
            fail(p, "expiry-threshold-s must be a multiple of revalidation-period-s");
    }
    if (auto s = n["static-blacklist"]) {
        expect_seq(s, "static-blacklist");
        for (const auto& x : s) b.static_blacklist.push_back(tuple(x, "blacklisted tuple"));
    }
    if (auto d = n["dir-authorities"]) {
        expect_seq(d, "dir-authorities");
        for (const auto& x : d) {
            check_keys(x, "dir-authority", {"tuple", "blocked"});
            if (!x["tuple"]) fail(x, "dir-authority needs a tuple");
            DirAuthoritySpec da;
            da.tuple = tuple(x["tuple"], "dir-authority tuple");
            opt(x, "blocked", da.blocked);
            b.dir_authorities.push_back(da);
        }
    }
    if (auto c = n["consensus"]) {
        check_keys(c, "blocking.consensus", {"relay-set", "first-ingest-s", "rounds"});
        b.consensus.enabled = true;
        if (!c["relay-set"]) fail(c, "consensus needs a relay-set");
        opt(c, "relay-set", b.consensus.relay_set);
        opt_time(c, "first-ingest-s", b.consensus.first_ingest);
        opt_int_range(c, "rounds", b.consensus.rounds, 0, 1 << 20);
    }
}

ClientSpec Loader::client(const YAML::Node& n) const {
    check_keys(n, "client", {"host", "kind", "target", "targets", "targets-from", "transport", "session-key",
                             "spa-secret", "start-s", "count", "interval-s", "interval-min-s", "interval-max-s",
                             "label", "fragment-mss", "http", "app-timeout-s"});
    ClientSpec c;
    if (!n["host"]) fail(n, "client needs a host");
    opt(n, "host", c.host);
    if (auto k = n["kind"]) {
        const auto v = as<std::string>(k, "kind");
        bool found = false;
        for (auto kind : {ClientKind::tor, ClientKind::http, ClientKind::https, ClientKind::tcp_probe, ClientKind::ping}) {
            if (v == to_string(kind)) {
                c.kind = kind;
                found = true;
            }
        }
        if (!found) fail(k, "unknown client kind '" + v + "'");
    }
    auto target_of = [&](const YAML::Node& x) {
        if (c.kind == ClientKind::ping) {
            const auto text = as<std::string>(x, "target");
            if (auto t = Tuple::parse(text)) return *t;
            return Tuple{address(x, "ping target"), 0};
        }
        return tuple(x, "target");
    };
    if (auto t = n["target"]) c.targets.push_back(target_of(t));
    if (auto t = n["targets"]) {
        expect_seq(t, "targets");
        for (const auto& x : t) c.targets.push_back(target_of(x));
    }
    opt(n, "targets-from", c.targets_from);
    if (c.targets.empty() && c.targets_from.empty()) fail(n, "client needs target, targets or targets-from");
    if (auto t = n["transport"]) {
        auto tr = protocol::parse_transport(as<std::string>(t, "transport"));
        if (!tr) fail(t, "unknown transport '" + t.Scalar() + "'");
        c.transport = *tr;
    } else if (c.kind == ClientKind::http) {
        c.transport = protocol::Transport::http;
    }
    opt(n, "session-key", c.session_key);
    opt(n, "spa-secret", c.spa_secret);
    if (c.kind == ClientKind::tor) {
        if (c.transport == protocol::Transport::http) fail(n, "tor clients use plain-tor, obfuscated or spa-guarded");
        if (c.transport == protocol::Transport::obfuscated && c.session_key.empty())
            fail(n, "obfuscated client needs a session-key");
        if (c.transport == protocol::Transport::spa_guarded && c.spa_secret.empty())
            fail(n, "spa-guarded client needs a spa-secret");
    }
    opt_time(n, "start-s", c.start);
    if (auto k = n["count"]) {
        c.count = as<std::int64_t>(k, "count");
        if (c.count < 0) fail(k, "count must be non-negative");
    }
    opt_seconds(n, "interval-s", c.interval, 1);
    opt_seconds(n, "interval-min-s", c.interval_min, 1);
    opt_seconds(n, "interval-max-s", c.interval_max, 1);
    if (n["interval-min-s"] || n["interval-max-s"]) {
        if (!n["interval-min-s"] || !n["interval-max-s"]) fail(n, "interval-min-s and interval-max-s go together");
        if (n["interval-s"]) fail(n, "use either interval-s or interval-min-s/interval-max-s");
        if (c.interval_min > c.interval_max) fail(n, "interval-min-s exceeds interval-max-s");
    }
    if (c.count != 1 && c.interval == 0 && c.interval_max == 0) fail(n, "repeating clients need an interval");
    opt(n, "label", c.label);
    if (c.label.empty()) c.label = c.host + "/" + to_string(c.kind);
    if (n["fragment-mss"]) {
        std::uint16_t mss = 0;
        opt_int_range(n, "fragment-mss", mss, 1, 65535);
        c.fragment_mss = mss;
    }
    opt_seconds(n, "app-timeout-s", c.app_timeout, 1);
    if (auto h = n["http"]) {
        check_keys(h, "client.http", {"host", "user-agent-hello", "zero-prefix", "path"});
        opt(h, "host", c.http.host_header);
        opt(h, "user-agent-hello", c.http.user_agent_hello);
        opt_int_range(h, "zero-prefix", c.http.zero_prefix, 0, 65535);
        opt(h, "path", c.http.path);
    }
    return c;
}

void Loader::validate(const YAML::Node& root, Scenario& s) const {
    std::map<std::string, std::size_t> names;
    std::map<Address, std::string> owners;
    auto claim = [&](Address a, const std::string& host, const YAML::Node& at) {
        auto [it, inserted] = owners.emplace(a, host);
        if (!inserted && it->second != host)
            fail(at, "address " + a.str() + " is assigned to both " + it->second + " and " + host);
        if (!inserted) fail(at, "address " + a.str() + " listed twice for " + host);
    };
    const auto& hosts = root["hosts"];
    for (std::size_t i = 0; i < s.hosts.size(); ++i) {
        const auto& h = s.hosts[i];
        if (!names.emplace(h.name, i).second) fail(hosts[i], "duplicate host name '" + h.name + "'");
        for (auto a : h.addresses) claim(a, h.name, hosts[i]);
    }
    const auto& rsets = root["relay-sets"];
    std::set<std::string> set_names;
    for (std::size_t i = 0; i < s.relay_sets.size(); ++i) {
        auto& r = s.relay_sets[i];
        if (!set_names.insert(r.name).second) fail(rsets[i], "duplicate relay set '" + r.name + "'");
        if (r.name == "dir-authorities") fail(rsets[i], "relay set name 'dir-authorities' is reserved");
        if (!names.count(r.host)) fail(rsets[i], "relay set host '" + r.host + "' is not declared");
        for (const auto& t : r.tuples()) claim(t.addr, r.host, rsets[i]);
    }
    const auto& links = root["links"];
    for (std::size_t i = 0; i < s.links.size(); ++i) {
        const auto& l = s.links[i];
        if (!names.count(l.a)) fail(links[i], "link endpoint '" + l.a + "' is not declared");
        if (!names.count(l.b)) fail(links[i], "link endpoint '" + l.b + "' is not declared");
        if (l.a == l.b) fail(links[i], "link endpoints must differ");
    }
    if (s.scanner.enabled) {
        auto it = names.find(s.scanner.host);
        if (it == names.end()) fail(root["scanner"], "scanner host '" + s.scanner.host + "' is not declared");
        const auto& sh = s.hosts[it->second];
        if (sh.region != Region::inside_china) fail(root["scanner"], "scanner host must be inside-china");
        const auto& p = s.scanner.pool;
        claim(p.master_address, sh.name, root["scanner"]);
        for (std::uint32_t k = 0; k < p.pool_size; ++k)
            claim(Address{p.first_pool_address.value + k}, sh.name, root["scanner"]);
    }
    if (s.blocking.consensus.enabled && !set_names.count(s.blocking.consensus.relay_set))
        fail(root["blocking"], "consensus relay-set '" + s.blocking.consensus.relay_set + "' is not declared");
    const auto& clients = root["clients"];
    for (std::size_t i = 0; i < s.clients.size(); ++i) {
        auto& c = s.clients[i];
        if (!names.count(c.host)) fail(clients[i], "client host '" + c.host + "' is not declared");
        if (!c.targets_from.empty()) {
            if (c.targets_from == "dir-authorities") {
                for (const auto& d : s.blocking.dir_authorities) c.targets.push_back(d.tuple);
            } else if (auto* r = s.find_relay_set(c.targets_from)) {
                auto t = r->tuples();
                c.targets.insert(c.targets.end(), t.begin(), t.end());
            } else {
                fail(clients[i], "targets-from '" + c.targets_from + "' names no relay set");
            }
            c.targets_from.clear();
        }
    }
}

Scenario Loader::load(const YAML::Node& root) {
    Scenario s;
    if (root.IsNull()) fail(root, "scenario is empty");
    check_keys(root, "scenario",
               {"meta", "hosts", "relay-sets", "links", "dpi", "scanner", "blocking", "analysis", "clients"});
    if (auto m = root["meta"]) meta(m, s.meta);
    if (auto h = root["hosts"]) {
        expect_seq(h, "hosts");
        for (const auto& x : h) s.hosts.push_back(host(x));
    }
    if (auto r = root["relay-sets"]) {
        expect_seq(r, "relay-sets");
        for (const auto& x : r) s.relay_sets.push_back(relay_set(x));
    }
    if (auto l = root["links"]) {
        expect_seq(l, "links");
        for (const auto& x : l) s.links.push_back(link(x));
    }
    if (auto d = root["dpi"]) dpi(d, s.dpi);
    if (auto sc = root["scanner"]) scanner(sc, s.scanner);
    if (auto b = root["blocking"]) blocking(b, s.blocking);
    if (auto a = root["analysis"]) {
        check_keys(a, "analysis", {"smoothing-alpha"});
        opt_fraction(a, "smoothing-alpha", s.smoothing_alpha);
    }
    if (auto c = root["clients"]) {
        expect_seq(c, "clients");
        for (const auto& x : c) s.clients.push_back(client(x));
    }
    validate(root, s);
    return s;
}

}  // namespace

const char* to_string(ServiceKind k) {
    switch (k) {
        case ServiceKind::tor_bridge: return "tor-bridge";
        case ServiceKind::tor_relay: return "tor-relay";
        case ServiceKind::http: return "http";
        case ServiceKind::https: return "https";
        case ServiceKind::echo: return "echo";
        case ServiceKind::dir_authority: return "dir-authority";
    }
    return "?";
}

const char* to_string(ClientKind k) {
    switch (k) {
        case ClientKind::tor: return "tor";
        case ClientKind::http: return "http";
        case ClientKind::https: return "https";
        case ClientKind::tcp_probe: return "tcp-probe";
        case ClientKind::ping: return "ping";
    }
    return "?";
}

std::vector<Tuple> RelaySetSpec::tuples() const {
    std::vector<Tuple> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) out.push_back(Tuple{Address{first_address.value + i}, port});
    return out;
}

const HostSpec* Scenario::find_host(const std::string& name) const {
    for (const auto& h : hosts) {
        if (h.name == name) return &h;
    }
    return nullptr;
}

const RelaySetSpec* Scenario::find_relay_set(const std::string& name) const {
    for (const auto& r : relay_sets) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

Scenario load_scenario_string(const std::string& text, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ScenarioError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg, e.mark.line + 1);
    }
    return Loader(origin).load(root);
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path + ": cannot open scenario file", 0);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scenario_string(buf.str(), path);
}

}  // namespace gfcsim::scenario
