#pragma once

#include <cstdint>
#include <vector>

#include "gfcsim/protocol/bytes.hpp"

namespace gfcsim::protocol {

/// Keyed, length-preserving stream transform standing in for an obfuscating
/// pluggable transport. Not cryptographically strong; it only has to erase
/// byte patterns a DPI box could match.
std::vector<std::uint8_t> obfuscate(ByteView payload, ByteView session_key);
std::vector<std::uint8_t> deobfuscate(ByteView payload, ByteView session_key);

/// Stateful form for a byte stream delivered in pieces: applying it to
/// consecutive chunks equals applying obfuscate() to their concatenation.
class ObfuscationStream {
public:
    explicit ObfuscationStream(ByteView session_key);
    std::vector<std::uint8_t> apply(ByteView chunk);
    std::uint64_t offset() const { return offset_; }

private:
    std::uint64_t key_hash_;
    std::uint64_t offset_ = 0;
};

}  // namespace gfcsim::protocol
