#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "gfcsim/simnet/address.hpp"
#include "gfcsim/simnet/segment.hpp"
#include "gfcsim/simnet/time.hpp"

namespace gfcsim {

using HostId = std::uint32_t;

enum class Region : std::uint8_t { inside_china, outside_china };

enum class Role : std::uint8_t { client, bridge, relay, dir_authority, web_server, scanner_pool, router };

std::string_view to_string(Region r);
std::string_view to_string(Role r);

struct HostInfo {
    std::string name;
    Region region = Region::outside_china;
    std::vector<Address> addresses;
    std::set<Role> roles;
};

struct Link {
    HostId a = 0;
    HostId b = 0;
    Seconds delay = 0;
    double loss = 0.0;
    int hop_count = 1;
    bool border = false;
    /// Censor middlebox (DPI + block enforcement) sits on this link.
    bool gfc = false;
};

/// Sequence of links from a source host to a destination host.
struct Path {
    std::vector<std::size_t> links;
    Seconds delay = 0;
    int hops = 0;
};

Direction direction_between(Region src, Region dst);

class Topology {
public:
    HostId add_host(HostInfo info);
    std::size_t add_link(Link link);
    /// Every address is owned by exactly one host; throws std::invalid_argument on reuse.
    void assign_address(Address addr, HostId owner);

    std::optional<HostId> owner(Address addr) const;
    const HostInfo& host(HostId id) const { return hosts_.at(id); }
    const Link& link(std::size_t i) const { return links_.at(i); }
    std::size_t host_count() const { return hosts_.size(); }
    std::size_t link_count() const { return links_.size(); }
    std::optional<HostId> find(const std::string& name) const;

    /// Minimum-delay path, ties broken by fewer hops. Cached.
    const Path* path(HostId from, HostId to);

private:
    struct Tree {
        std::vector<std::int64_t> parent_link;  // -1 for the root/unreachable
        std::vector<bool> reached;
    };
    const Tree& tree_from(HostId from);

    std::vector<HostInfo> hosts_;
    std::vector<Link> links_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::unordered_map<Address, HostId> owners_;
    std::map<std::string, HostId> by_name_;
    std::unordered_map<HostId, Tree> trees_;
    std::map<std::pair<HostId, HostId>, std::optional<Path>> paths_;
};

}  // namespace gfcsim
