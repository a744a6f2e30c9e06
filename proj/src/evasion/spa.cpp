#include "gfcsim/evasion/spa.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gfcsim/simnet/rng.hpp"

namespace gfcsim::evasion {
namespace {

constexpr std::string_view kMagic = "SPA1";

std::uint64_t tag_for(protocol::ByteView secret, std::int64_t issued) {
    std::string material(secret.begin(), secret.end());
    material.push_back('\0');
    material += std::to_string(issued);
    std::uint64_t state = fnv1a64(material);
    splitmix64(state);
    return splitmix64(state);
}

void put_u64(Bytes& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint64_t get_u64(protocol::ByteView in, std::size_t at) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | in[at + i];
    return v;
}

}  // namespace

void SpaPolicy::validate() const {
    if (shared_secret.empty()) throw std::invalid_argument("spa shared secret must not be empty");
    if (auth_validity <= 0) throw std::invalid_argument("spa auth validity must be positive");
}

Bytes make_spa_token(protocol::ByteView secret, SimTime issued) {
    Bytes out(kMagic.begin(), kMagic.end());
    put_u64(out, static_cast<std::uint64_t>(issued.sec));
    put_u64(out, tag_for(secret, issued.sec));
    return out;
}

std::optional<SimTime> verify_spa_token(protocol::ByteView payload, protocol::ByteView secret) {
    if (payload.size() != kSpaTokenSize || !protocol::starts_with(payload, kMagic)) return std::nullopt;
    const auto issued = static_cast<std::int64_t>(get_u64(payload, 4));
    if (issued < 0 || get_u64(payload, 12) != tag_for(secret, issued)) return std::nullopt;
    return SimTime{issued};
}

std::optional<SimTime> SpaGate::on_datagram(Address source, protocol::ByteView payload, SimTime now) {
    auto issued = verify_spa_token(payload, policy_.shared_secret);
    if (!issued || *issued > now) return std::nullopt;
    const SimTime until = *issued + policy_.auth_validity;
    if (until <= now) return std::nullopt;
    auto& slot = open_until_[source];
    slot = std::max(slot, until);
    return until;
}

bool SpaGate::allowed(Address source, SimTime now) const {
    auto it = open_until_.find(source);
    return it != open_until_.end() && now < it->second;
}

}  // namespace gfcsim::evasion
