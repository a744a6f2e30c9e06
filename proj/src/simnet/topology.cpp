#include "gfcsim/simnet/topology.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace gfcsim {

std::string_view to_string(Region r) { return r == Region::inside_china ? "inside-china" : "outside-china"; }

std::string_view to_string(Role r) {
    switch (r) {
        case Role::client: return "client";
        case Role::bridge: return "bridge";
        case Role::relay: return "relay";
        case Role::dir_authority: return "dir-authority";
        case Role::web_server: return "web-server";
        case Role::scanner_pool: return "scanner-pool";
        case Role::router: return "router";
    }
    return "?";
}

Direction direction_between(Region src, Region dst) {
    if (src == dst) return Direction::domestic;
    return src == Region::inside_china ? Direction::egress : Direction::ingress;
}

HostId Topology::add_host(HostInfo info) {
    const auto id = static_cast<HostId>(hosts_.size());
    if (!by_name_.emplace(info.name, id).second) throw std::invalid_argument("duplicate host id '" + info.name + "'");
    for (auto a : info.addresses) assign_address(a, id);
    hosts_.push_back(std::move(info));
    adjacency_.emplace_back();
    trees_.clear();
    paths_.clear();
    return id;
}

std::size_t Topology::add_link(Link link) {
    if (link.a >= hosts_.size() || link.b >= hosts_.size()) throw std::invalid_argument("link endpoint out of range");
    const auto i = links_.size();
    links_.push_back(link);
    adjacency_[link.a].push_back(i);
    adjacency_[link.b].push_back(i);
    trees_.clear();
    paths_.clear();
    return i;
}

void Topology::assign_address(Address addr, HostId owner_id) {
    auto [it, inserted] = owners_.emplace(addr, owner_id);
    if (!inserted && it->second != owner_id) {
        throw std::invalid_argument("address " + addr.str() + " already owned by another host");
    }
}

std::optional<HostId> Topology::owner(Address addr) const {
    auto it = owners_.find(addr);
    if (it == owners_.end()) return std::nullopt;
    return it->second;
}

std::optional<HostId> Topology::find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

const Topology::Tree& Topology::tree_from(HostId from) {
    if (auto it = trees_.find(from); it != trees_.end()) return it->second;
    using Key = std::tuple<Seconds, int, HostId>;  // (delay, hops, host)
    const auto n = hosts_.size();
    std::vector<Seconds> dist(n, -1);
    std::vector<int> hops(n, 0);
    Tree tree{std::vector<std::int64_t>(n, -1), std::vector<bool>(n, false)};
    std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
    dist[from] = 0;
    pq.emplace(0, 0, from);
    while (!pq.empty()) {
        auto [d, h, u] = pq.top();
        pq.pop();
        if (tree.reached[u]) continue;
        tree.reached[u] = true;
        for (auto li : adjacency_[u]) {
            const auto& l = links_[li];
            const HostId v = l.a == u ? l.b : l.a;
            if (tree.reached[v]) continue;
            const Seconds nd = d + l.delay;
            const int nh = h + l.hop_count;
            if (dist[v] < 0 || std::tie(nd, nh) < std::tie(dist[v], hops[v])) {
                dist[v] = nd;
                hops[v] = nh;
                tree.parent_link[v] = static_cast<std::int64_t>(li);
                pq.emplace(nd, nh, v);
            }
        }
    }
    return trees_.emplace(from, std::move(tree)).first->second;
}

const Path* Topology::path(HostId from, HostId to) {
    auto key = std::make_pair(from, to);
    if (auto it = paths_.find(key); it != paths_.end()) return it->second ? &*it->second : nullptr;
    const auto& tree = tree_from(from);
    std::optional<Path> result;
    if (to < hosts_.size() && tree.reached[to]) {
        Path p;
        HostId cur = to;
        while (cur != from) {
            const auto li = static_cast<std::size_t>(tree.parent_link[cur]);
            p.links.push_back(li);
            p.delay += links_[li].delay;
            p.hops += links_[li].hop_count;
            cur = links_[li].a == cur ? links_[li].b : links_[li].a;
        }
        std::reverse(p.links.begin(), p.links.end());
        result = std::move(p);
    }
    auto& slot = paths_[key] = std::move(result);
    return slot ? &*slot : nullptr;
}

}  // namespace gfcsim
