#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "gfcsim/simnet/address.hpp"
#include "gfcsim/simnet/rng.hpp"

namespace gfcsim::scanner {

struct AsWeight {
    std::string label;
    double weight = 0;
};

struct PoolConfig {
    Address master_address{0x3A000046};  // 58.0.0.70
    std::string master_as = "AS4837";
    double master_probability = 0.51;
    std::uint32_t pool_size = 10000;
    Address first_pool_address{0x3C000001};  // 60.0.0.1
    std::vector<AsWeight> as_weights{{"AS4837", 0.657}, {"AS4134", 0.305}, {"AS17622", 0.038}};
};

struct SourcePick {
    Address address;
    std::string as_label;
    bool master = false;
    bool recycled = false;  // pool was exhausted; an old address was reused
};

/// Source address selection for scans: one busy master address, otherwise a
/// fresh address from a large pool, unique until the pool runs dry.
class ScannerPool {
public:
    ScannerPool(PoolConfig cfg, RngStream& rng);

    SourcePick pick_source();

    /// Master plus every pool address (for address ownership).
    std::vector<Address> addresses() const;
    const PoolConfig& config() const { return cfg_; }
    std::uint64_t exhaustions() const { return exhaustions_; }

private:
    PoolConfig cfg_;
    RngStream& rng_;
    std::vector<std::uint32_t> order_;  // partial Fisher-Yates over pool indices
    std::uint32_t drawn_ = 0;
    std::deque<std::uint32_t> recycle_;  // drawn indices, oldest first
    std::unordered_map<std::uint32_t, std::string> as_of_;
    std::vector<double> weights_;
    std::uint64_t exhaustions_ = 0;
};

}  // namespace gfcsim::scanner
