#include <yaml-cpp/yaml.h>

#include "gfcsim/scenario/scenario.hpp"

namespace gfcsim::scenario {
namespace {

void window_list(YAML::Emitter& e, const std::vector<TimeWindow>& ws) {
    e << YAML::BeginSeq;
    for (const auto& w : ws) {
        e << YAML::Flow << YAML::BeginMap << YAML::Key << "from-s" << YAML::Value << w.from.sec << YAML::Key << "to-s"
          << YAML::Value << w.to.sec << YAML::EndMap;
    }
    e << YAML::EndSeq;
}

void tcp(YAML::Emitter& e, const TcpParams& p) {
    e << YAML::BeginMap;
    e << YAML::Key << "initial-ttl" << YAML::Value << int{p.initial_ttl};
    e << YAML::Key << "mss" << YAML::Value << p.mss;
    e << YAML::Key << "window" << YAML::Value << p.window;
    e << YAML::Key << "syn-retries" << YAML::Value << p.syn_retries;
    e << YAML::Key << "data-retries" << YAML::Value << p.data_retries;
    e << YAML::Key << "rto-base-s" << YAML::Value << p.rto_base;
    e << YAML::Key << "backoff-multiplier" << YAML::Value << p.backoff_multiplier;
    e << YAML::EndMap;
}

void host(YAML::Emitter& e, const HostSpec& h) {
    e << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << h.name;
    e << YAML::Key << "region" << YAML::Value << std::string(to_string(h.region));
    e << YAML::Key << "addresses" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto a : h.addresses) e << a.str();
    e << YAML::EndSeq;
    e << YAML::Key << "roles" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto r : h.roles) e << std::string(to_string(r));
    e << YAML::EndSeq;
    e << YAML::Key << "tcp" << YAML::Value;
    tcp(e, h.tcp);
    e << YAML::Key << "services" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : h.services) {
        e << YAML::Flow << YAML::BeginMap;
        e << YAML::Key << "port" << YAML::Value << s.port;
        e << YAML::Key << "kind" << YAML::Value << to_string(s.kind);
        e << YAML::Key << "transport" << YAML::Value << std::string(protocol::to_string(s.transport));
        if (!s.session_key.empty()) e << YAML::Key << "session-key" << YAML::Value << s.session_key;
        e << YAML::EndMap;
    }
    e << YAML::EndSeq;
    if (h.fragment) {
        e << YAML::Key << "fragment" << YAML::Value << YAML::BeginMap << YAML::Key << "mss-override" << YAML::Value
          << h.fragment->mss_override << YAML::EndMap;
    }
    if (h.guard) {
        const auto& g = *h.guard;
        e << YAML::Key << "guard" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "syn-accept-index" << YAML::Value << g.syn_accept_index;
        e << YAML::Key << "deaf-window-s" << YAML::Value << g.deaf_window;
        e << YAML::Key << "idle-reset-s" << YAML::Value << g.idle_reset;
        if (g.synack_window_override)
            e << YAML::Key << "synack-window-override" << YAML::Value << *g.synack_window_override;
        e << YAML::EndMap;
    }
    if (h.spa) {
        e << YAML::Key << "spa" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "shared-secret" << YAML::Value
          << std::string(h.spa->shared_secret.begin(), h.spa->shared_secret.end());
        e << YAML::Key << "auth-validity-s" << YAML::Value << h.spa->auth_validity;
        e << YAML::EndMap;
    }
    if (h.whitelist) {
        e << YAML::Key << "whitelist" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "from-s" << YAML::Value << h.whitelist->from.sec;
        e << YAML::Key << "allow" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (auto a : h.whitelist->allow) e << a.str();
        e << YAML::EndSeq << YAML::EndMap;
    }
    e << YAML::Key << "offline" << YAML::Value;
    window_list(e, h.offline);
    e << YAML::Key << "observe-scanners" << YAML::Value << h.observe_scanners;
    e << YAML::EndMap;
}

void scanner(YAML::Emitter& e, const ScannerSpec& s) {
    e << YAML::BeginMap;
    e << YAML::Key << "host" << YAML::Value << s.host;
    e << YAML::Key << "syn-retries" << YAML::Value << s.syn_retries;
    e << YAML::Key << "syn-rto-s" << YAML::Value << s.syn_rto;
    e << YAML::Key << "backoff-multiplier" << YAML::Value << s.backoff_multiplier;
    e << YAML::Key << "initial-ttl" << YAML::Value << int{s.initial_ttl};
    e << YAML::Key << "handshake-timeout-s" << YAML::Value << s.handshake_timeout;
    const auto& p = s.pool;
    e << YAML::Key << "pool" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "master-address" << YAML::Value << p.master_address.str();
    e << YAML::Key << "master-as" << YAML::Value << p.master_as;
    e << YAML::Key << "master-probability" << YAML::Value << p.master_probability;
    e << YAML::Key << "pool-size" << YAML::Value << p.pool_size;
    e << YAML::Key << "first-pool-address" << YAML::Value << p.first_pool_address.str();
    e << YAML::Key << "as-weights" << YAML::Value << YAML::BeginSeq;
    for (const auto& w : p.as_weights) {
        e << YAML::Flow << YAML::BeginMap << YAML::Key << "as" << YAML::Value << w.label << YAML::Key << "weight"
          << YAML::Value << w.weight << YAML::EndMap;
    }
    e << YAML::EndSeq << YAML::EndMap;
    const auto& l = s.load;
    e << YAML::Key << "load-curve" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "shape" << YAML::Value
      << (l.shape == scanner::LoadCurve::Shape::flat ? "flat" : "raised-cosine");
    e << YAML::Key << "max-extra-delay-s" << YAML::Value << l.max_extra_delay;
    e << YAML::Key << "peak-hour" << YAML::Value << l.peak_hour;
    e << YAML::Key << "period-s" << YAML::Value << l.period;
    e << YAML::EndMap;
    const auto& t = s.spoof;
    e << YAML::Key << "ttl-spoof" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "live-probability" << YAML::Value << t.live_probability;
    e << YAML::Key << "onset-min-minutes" << YAML::Value << t.onset_min_minutes;
    e << YAML::Key << "onset-max-minutes" << YAML::Value << t.onset_max_minutes;
    e << YAML::Key << "typical-delta" << YAML::Value << t.typical_delta;
    e << YAML::Key << "outlier-probability" << YAML::Value << t.outlier_probability;
    e << YAML::Key << "outlier-deltas" << YAML::Value << YAML::Flow << t.outlier_deltas;
    e << YAML::EndMap;
    e << YAML::EndMap;
}

void client(YAML::Emitter& e, const ClientSpec& c) {
    e << YAML::BeginMap;
    e << YAML::Key << "host" << YAML::Value << c.host;
    e << YAML::Key << "kind" << YAML::Value << to_string(c.kind);
    e << YAML::Key << "label" << YAML::Value << c.label;
    e << YAML::Key << "targets" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& t : c.targets) e << (c.kind == ClientKind::ping && t.port == 0 ? t.addr.str() : t.str());
    e << YAML::EndSeq;
    e << YAML::Key << "transport" << YAML::Value << std::string(protocol::to_string(c.transport));
    if (!c.session_key.empty()) e << YAML::Key << "session-key" << YAML::Value << c.session_key;
    if (!c.spa_secret.empty()) e << YAML::Key << "spa-secret" << YAML::Value << c.spa_secret;
    e << YAML::Key << "start-s" << YAML::Value << c.start.sec;
    e << YAML::Key << "count" << YAML::Value << c.count;
    if (c.random_interval()) {
        e << YAML::Key << "interval-min-s" << YAML::Value << c.interval_min;
        e << YAML::Key << "interval-max-s" << YAML::Value << c.interval_max;
    } else if (c.interval > 0) {
        e << YAML::Key << "interval-s" << YAML::Value << c.interval;
    }
    if (c.fragment_mss) e << YAML::Key << "fragment-mss" << YAML::Value << *c.fragment_mss;
    e << YAML::Key << "app-timeout-s" << YAML::Value << c.app_timeout;
    e << YAML::Key << "http" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "host" << YAML::Value << c.http.host_header;
    e << YAML::Key << "user-agent-hello" << YAML::Value << c.http.user_agent_hello;
    e << YAML::Key << "zero-prefix" << YAML::Value << c.http.zero_prefix;
    e << YAML::Key << "path" << YAML::Value << c.http.path;
    e << YAML::EndMap;
    e << YAML::EndMap;
}

}  // namespace

std::string echo_scenario(const Scenario& s) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;

    e << YAML::Key << "meta" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << s.meta.name;
    if (!s.meta.description.empty()) e << YAML::Key << "description" << YAML::Value << s.meta.description;
    e << YAML::Key << "duration-s" << YAML::Value << s.meta.duration;
    e << YAML::Key << "seed" << YAML::Value << s.meta.seed;
    e << YAML::Key << "log-segments" << YAML::Value << s.meta.log_segments;
    e << YAML::EndMap;

    e << YAML::Key << "hosts" << YAML::Value << YAML::BeginSeq;
    for (const auto& h : s.hosts) host(e, h);
    e << YAML::EndSeq;

    e << YAML::Key << "relay-sets" << YAML::Value << YAML::BeginSeq;
    for (const auto& r : s.relay_sets) {
        e << YAML::Flow << YAML::BeginMap;
        e << YAML::Key << "name" << YAML::Value << r.name;
        e << YAML::Key << "host" << YAML::Value << r.host;
        e << YAML::Key << "count" << YAML::Value << r.count;
        e << YAML::Key << "first-address" << YAML::Value << r.first_address.str();
        e << YAML::Key << "port" << YAML::Value << r.port;
        e << YAML::EndMap;
    }
    e << YAML::EndSeq;

    e << YAML::Key << "links" << YAML::Value << YAML::BeginSeq;
    for (const auto& l : s.links) {
        e << YAML::Flow << YAML::BeginMap;
        e << YAML::Key << "a" << YAML::Value << l.a;
        e << YAML::Key << "b" << YAML::Value << l.b;
        e << YAML::Key << "delay-s" << YAML::Value << l.delay;
        e << YAML::Key << "loss-probability" << YAML::Value << l.loss;
        e << YAML::Key << "hop-count" << YAML::Value << l.hop_count;
        e << YAML::Key << "border" << YAML::Value << l.border;
        e << YAML::Key << "dpi" << YAML::Value << l.dpi;
        e << YAML::EndMap;
    }
    e << YAML::EndSeq;

    e << YAML::Key << "dpi" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "inspect-directions" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto d : s.dpi.inspect_directions) e << std::string(to_string(d));
    e << YAML::EndSeq;
    e << YAML::Key << "http-block-hosts" << YAML::Value << YAML::Flow << s.dpi.http_block_hosts;
    e << YAML::Key << "http-method-tokens" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& t : s.dpi.http_method_tokens) e << YAML::DoubleQuoted << t;
    e << YAML::EndSeq;
    e << YAML::Key << "disabled" << YAML::Value;
    window_list(e, s.dpi.disabled);
    e << YAML::EndMap;

    if (s.scanner.enabled) {
        e << YAML::Key << "scanner" << YAML::Value;
        scanner(e, s.scanner);
    }

    const auto& b = s.blocking;
    e << YAML::Key << "blocking" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "policy" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "expiry-threshold-s" << YAML::Value << b.policy.expiry_threshold;
    e << YAML::Key << "revalidation-period-s" << YAML::Value << b.policy.revalidation_period;
    e << YAML::Key << "consensus-ingest-period-s" << YAML::Value << b.policy.consensus_ingest_period;
    e << YAML::Key << "consensus-miss-rate" << YAML::Value << b.policy.consensus_miss_rate;
    e << YAML::EndMap;
    e << YAML::Key << "static-blacklist" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& t : b.static_blacklist) e << t.str();
    e << YAML::EndSeq;
    e << YAML::Key << "dir-authorities" << YAML::Value << YAML::BeginSeq;
    for (const auto& d : b.dir_authorities) {
        e << YAML::Flow << YAML::BeginMap << YAML::Key << "tuple" << YAML::Value << d.tuple.str() << YAML::Key
          << "blocked" << YAML::Value << d.blocked << YAML::EndMap;
    }
    e << YAML::EndSeq;
    if (b.consensus.enabled) {
        e << YAML::Key << "consensus" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "relay-set" << YAML::Value << b.consensus.relay_set;
        e << YAML::Key << "first-ingest-s" << YAML::Value << b.consensus.first_ingest.sec;
        e << YAML::Key << "rounds" << YAML::Value << b.consensus.rounds;
        e << YAML::EndMap;
    }
    e << YAML::EndMap;

    e << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap << YAML::Key << "smoothing-alpha" << YAML::Value
      << s.smoothing_alpha << YAML::EndMap;

    e << YAML::Key << "clients" << YAML::Value << YAML::BeginSeq;
    for (const auto& c : s.clients) client(e, c);
    e << YAML::EndSeq;

    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

}  // namespace gfcsim::scenario
