#pragma once

#include <cstdint>
#include <vector>

#include "gfcsim/protocol/bytes.hpp"
#include "gfcsim/simnet/segment.hpp"

namespace gfcsim::evasion {

/// Client-side segmentation of the outbound byte stream.
struct FragmentPolicy {
    std::uint16_t mss_override = 16;
};

/// Splits `payload` into chunks of `mss` bytes; the last chunk may be shorter.
/// Throws std::invalid_argument for mss 0.
std::vector<Bytes> fragment_stream(protocol::ByteView payload, std::size_t mss);

}  // namespace gfcsim::evasion
