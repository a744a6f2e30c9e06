#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "gfcsim/protocol/bytes.hpp"
#include "gfcsim/simnet/address.hpp"
#include "gfcsim/simnet/segment.hpp"
#include "gfcsim/simnet/time.hpp"

namespace gfcsim::evasion {

struct SpaPolicy {
    Bytes shared_secret;
    Seconds auth_validity = 60;

    void validate() const;
};

/// Token layout: "SPA1" | issued-at (8 bytes, big endian) | tag (8 bytes).
inline constexpr std::size_t kSpaTokenSize = 20;

Bytes make_spa_token(protocol::ByteView secret, SimTime issued);

/// Issue time of a well-formed token carrying the right tag, else nullopt.
std::optional<SimTime> verify_spa_token(protocol::ByteView payload, protocol::ByteView secret);

/// Per-bridge authorisation state. A valid token opens its source address
/// until issued + validity; everything else is ignored without reply.
class SpaGate {
public:
    explicit SpaGate(SpaPolicy policy) : policy_(std::move(policy)) { policy_.validate(); }

    /// Returns the time until which the source is open, or nullopt when the
    /// datagram is malformed, forged, stale, or from the future.
    std::optional<SimTime> on_datagram(Address source, protocol::ByteView payload, SimTime now);
    bool allowed(Address source, SimTime now) const;
    const SpaPolicy& policy() const { return policy_; }

private:
    SpaPolicy policy_;
    std::map<Address, SimTime> open_until_;
};

}  // namespace gfcsim::evasion
