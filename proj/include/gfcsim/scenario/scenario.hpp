#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfcsim/blocktable/block_table.hpp"
#include "gfcsim/dpi/dpi.hpp"
#include "gfcsim/evasion/fragment.hpp"
#include "gfcsim/evasion/guard.hpp"
#include "gfcsim/evasion/spa.hpp"
#include "gfcsim/protocol/tls.hpp"
#include "gfcsim/scanner/load_curve.hpp"
#include "gfcsim/scanner/scanner_pool.hpp"
#include "gfcsim/scanner/ttl_spoof.hpp"
#include "gfcsim/simnet/tcp.hpp"
#include "gfcsim/simnet/topology.hpp"
#include "gfcsim/simnet/window.hpp"

namespace gfcsim::scenario {

/// Load or validation failure. `line` is 1-based, 0 when not tied to a line.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class ServiceKind { tor_bridge, tor_relay, http, https, echo, dir_authority };

const char* to_string(ServiceKind k);

struct ServiceSpec {
    std::uint16_t port = 0;
    ServiceKind kind = ServiceKind::tor_bridge;
    protocol::Transport transport = protocol::Transport::plain_tor;
    std::string session_key;
};

/// From `from` on, the host drops SYNs from every source not listed.
struct WhitelistSpec {
    SimTime from;
    std::vector<Address> allow;
};

struct HostSpec {
    std::string name;
    Region region = Region::outside_china;
    std::vector<Address> addresses;
    std::set<Role> roles;
    TcpParams tcp;
    std::vector<ServiceSpec> services;
    std::optional<evasion::FragmentPolicy> fragment;
    std::optional<evasion::GuardPolicy> guard;
    std::optional<evasion::SpaPolicy> spa;
    std::optional<WhitelistSpec> whitelist;
    std::vector<TimeWindow> offline;
    /// Ping the source of every inbound connection for 16 minutes.
    bool observe_scanners = false;
};

/// A block of consecutive addresses on one host, each serving Tor on `port`.
struct RelaySetSpec {
    std::string name;
    std::string host;
    std::uint32_t count = 0;
    Address first_address;
    std::uint16_t port = 9001;

    std::vector<Tuple> tuples() const;
};

struct LinkSpec {
    std::string a;
    std::string b;
    Seconds delay = 0;
    double loss = 0.0;
    int hop_count = 1;
    bool border = false;
    bool dpi = false;
};

struct ScannerSpec {
    bool enabled = false;
    std::string host;
    scanner::PoolConfig pool;
    scanner::LoadCurve load;
    scanner::TtlSpoofModel spoof;
    int syn_retries = 1;
    Seconds syn_rto = 3;
    int backoff_multiplier = 1;
    std::uint8_t initial_ttl = 48;
    Seconds handshake_timeout = 30;
};

struct DirAuthoritySpec {
    Tuple tuple;
    bool blocked = true;
};

struct ConsensusSpec {
    bool enabled = false;
    std::string relay_set;
    SimTime first_ingest;
    /// 0 ingests every period until the run ends.
    int rounds = 0;
};

struct BlockingSpec {
    blocktable::BlockPolicy policy;
    std::vector<Tuple> static_blacklist;
    std::vector<DirAuthoritySpec> dir_authorities;
    ConsensusSpec consensus;
};

enum class ClientKind { tor, http, https, tcp_probe, ping };

const char* to_string(ClientKind k);

struct HttpOptions {
    std::string host_header = "www.example.com";
    /// Carry the Tor client hello in the User-Agent header.
    bool user_agent_hello = false;
    /// Overwrite this many leading request bytes with 0x00.
    int zero_prefix = 0;
    std::string path = "/";
};

struct ClientSpec {
    std::string host;
    ClientKind kind = ClientKind::tor;
    std::vector<Tuple> targets;
    /// Relay-set name or "dir-authorities"; resolved into `targets` at load.
    std::string targets_from;
    protocol::Transport transport = protocol::Transport::plain_tor;
    std::string session_key;
    std::string spa_secret;
    SimTime start;
    /// Number of rounds; 0 repeats until the run ends.
    std::int64_t count = 1;
    Seconds interval = 0;
    Seconds interval_min = 0;
    Seconds interval_max = 0;
    std::string label;
    std::optional<std::uint16_t> fragment_mss;
    HttpOptions http;
    /// Application-level deadline after TCP establishment.
    Seconds app_timeout = 60;

    bool random_interval() const { return interval_max > 0; }
};

struct Meta {
    std::string name = "unnamed";
    std::string description;
    Seconds duration = 3600;
    std::uint64_t seed = 1;
    bool log_segments = true;
};

struct Scenario {
    Meta meta;
    std::vector<HostSpec> hosts;
    std::vector<RelaySetSpec> relay_sets;
    std::vector<LinkSpec> links;
    dpi::DpiConfig dpi;
    ScannerSpec scanner;
    BlockingSpec blocking;
    double smoothing_alpha = 0.05;
    std::vector<ClientSpec> clients;

    const HostSpec* find_host(const std::string& name) const;
    const RelaySetSpec* find_relay_set(const std::string& name) const;
};

/// Parses and validates. Every error names the source and line.
Scenario load_scenario_file(const std::string& path);
Scenario load_scenario_string(const std::string& text, const std::string& origin = "<string>");

/// Full effective configuration, defaults included, in the scenario format.
/// Loading the echo yields an equivalent scenario.
std::string echo_scenario(const Scenario& s);

}  // namespace gfcsim::scenario
