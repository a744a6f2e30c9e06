#include "gfcsim/simnet/rng.hpp"

#include <limits>

namespace gfcsim {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw SimulationError("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next_u64());
    const std::uint64_t n = span + 1;
    // Reject the top partial bucket so every value is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % n);
}

std::size_t RngStream::weighted_index(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    double u = uniform01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    return weights.empty() ? 0 : weights.size() - 1;
}

RngStreams::RngStreams(std::uint64_t master_seed) : seed_(master_seed) {
    for (auto name : {kLoss, kDelays, kScannerPool, kClientBehavior, kSpoof, kConsensus}) register_stream(name);
}

void RngStreams::register_stream(std::string_view name) {
    if (has(name)) return;
    std::uint64_t state = seed_ ^ fnv1a64(name);
    streams_.emplace(std::string(name), RngStream(splitmix64(state)));
}

RngStream& RngStreams::stream(std::string_view name) {
    auto it = streams_.find(name);
    if (it == streams_.end()) throw SimulationError("unknown rng stream '" + std::string(name) + "'");
    return it->second;
}

double RngStreams::draw(std::string_view name, DrawKind kind) {
    auto& s = stream(name);
    switch (kind) {
        case DrawKind::uniform01: return s.uniform01();
        case DrawKind::u64: return static_cast<double>(s.next_u64());
    }
    return 0;
}

}  // namespace gfcsim
