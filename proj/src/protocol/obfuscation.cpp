#include "gfcsim/protocol/obfuscation.hpp"

#include <stdexcept>
#include <string_view>

#include "gfcsim/simnet/rng.hpp"

namespace gfcsim::protocol {

namespace {

std::uint64_t hash_key(ByteView key) {
    if (key.empty()) throw std::invalid_argument("obfuscation session key must be non-empty");
    std::string_view sv(reinterpret_cast<const char*>(key.data()), key.size());
    std::uint64_t state = fnv1a64(sv) ^ (std::uint64_t{key.size()} << 56);
    return splitmix64(state);
}

std::uint8_t keystream_byte(std::uint64_t key_hash, std::uint64_t pos) {
    std::uint64_t state = key_hash ^ ((pos / 8) * 0xd1342543de82ef95ULL);
    const std::uint64_t block = splitmix64(state);
    return static_cast<std::uint8_t>(block >> (8 * (pos % 8)));
}

}  // namespace

ObfuscationStream::ObfuscationStream(ByteView session_key) : key_hash_(hash_key(session_key)) {}

std::vector<std::uint8_t> ObfuscationStream::apply(ByteView chunk) {
    std::vector<std::uint8_t> out(chunk.begin(), chunk.end());
    for (auto& b : out) b ^= keystream_byte(key_hash_, offset_++);
    return out;
}

std::vector<std::uint8_t> obfuscate(ByteView payload, ByteView session_key) {
    return ObfuscationStream(session_key).apply(payload);
}

std::vector<std::uint8_t> deobfuscate(ByteView payload, ByteView session_key) {
    return ObfuscationStream(session_key).apply(payload);
}

}  // namespace gfcsim::protocol
