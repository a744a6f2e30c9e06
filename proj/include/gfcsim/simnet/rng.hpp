#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gfcsim {

/// Raised when a simulation is driven outside its contract (past scheduling,
/// unknown RNG stream). The run cannot continue.
class SimulationError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t fnv1a64(std::string_view bytes);

/// One named substream. Distributions are implemented here rather than via
/// <random> distribution classes, whose output is implementation-defined;
/// std::mt19937_64 itself is fully specified, so draws are portable.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { ++draws_; return engine_(); }
    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform01();
    /// Uniform integer in [lo, hi], inclusive. Unbiased.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    bool bernoulli(double p) { return uniform01() < p; }
    /// Index drawn according to `weights` (need not be normalised).
    std::size_t weighted_index(const std::vector<double>& weights);

    std::uint64_t draws() const { return draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

enum class DrawKind { uniform01, u64 };

/// Registry of independent substreams derived from one master seed. Changing
/// how often one consumer draws leaves every other stream untouched.
class RngStreams {
public:
    static constexpr std::string_view kLoss = "loss";
    static constexpr std::string_view kDelays = "delays";
    static constexpr std::string_view kScannerPool = "scanner-pool";
    static constexpr std::string_view kClientBehavior = "client-behavior";
    static constexpr std::string_view kSpoof = "spoof";
    static constexpr std::string_view kConsensus = "consensus";

    /// Registers the default stream set.
    explicit RngStreams(std::uint64_t master_seed);

    void register_stream(std::string_view name);
    RngStream& stream(std::string_view name);
    bool has(std::string_view name) const { return streams_.count(std::string(name)) != 0; }

    /// Single draw from a named stream; u64 results are returned as double
    /// only for uniform01, so callers wanting raw bits use stream().next_u64().
    double draw(std::string_view name, DrawKind kind);

    std::uint64_t master_seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::map<std::string, RngStream, std::less<>> streams_;
};

}  // namespace gfcsim
