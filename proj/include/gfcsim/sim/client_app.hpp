#pragma once

#include <cstdint>
#include <map>
#include <memory>

#include "gfcsim/protocol/handshake.hpp"
#include "gfcsim/scenario/scenario.hpp"
#include "gfcsim/sim/host.hpp"

namespace gfcsim::sim {

/// Drives one client declaration: rounds of connection attempts against its
/// targets, logging connection-established / connection-failed records.
class ClientApp {
public:
    ClientApp(Host& host, scenario::ClientSpec spec);
    ClientApp(const ClientApp&) = delete;
    ClientApp& operator=(const ClientApp&) = delete;

    /// Schedules rounds from spec.start up to (excluding) `end`.
    void start(SimTime end);

    std::uint64_t attempts() const { return attempts_started_; }
    const scenario::ClientSpec& spec() const { return spec_; }

private:
    struct Attempt {
        std::uint64_t id = 0;
        Tuple target;
        Tuple local;
        ConnId conn = 0;
        std::int64_t round = 0;
        std::unique_ptr<protocol::HandshakeMachine> hs;
        bool tcp_up = false;
        bool done = false;
    };

    void round(std::int64_t n, SimTime end);
    void launch(const Tuple& target, std::int64_t round);
    void launch_ping(const Tuple& target, std::int64_t round);
    Bytes first_payload(Attempt& a);
    void on_established(std::uint64_t id);
    void on_data(std::uint64_t id, std::span<const std::uint8_t> data);
    void succeed(Attempt& a, const char* layer);
    void fail(Attempt& a, std::string_view reason);
    Attributes attrs(const Attempt& a) const;
    Attempt* find(std::uint64_t id);

    Host& host_;
    scenario::ClientSpec spec_;
    std::map<std::uint64_t, std::unique_ptr<Attempt>> live_;
    std::uint64_t next_id_ = 1;
    std::uint64_t attempts_started_ = 0;
};

/// The request bytes an HTTP client sends for `opts`.
Bytes build_http_probe(const scenario::HttpOptions& opts);

}  // namespace gfcsim::sim
