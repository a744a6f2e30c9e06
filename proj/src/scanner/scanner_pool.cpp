#include "gfcsim/scanner/scanner_pool.hpp"

#include <numeric>
#include <stdexcept>

namespace gfcsim::scanner {

ScannerPool::ScannerPool(PoolConfig cfg, RngStream& rng) : cfg_(std::move(cfg)), rng_(rng) {
    if (cfg_.pool_size == 0) throw std::invalid_argument("scanner pool must not be empty");
    if (cfg_.as_weights.empty()) throw std::invalid_argument("scanner pool needs AS weights");
    order_.resize(cfg_.pool_size);
    std::iota(order_.begin(), order_.end(), 0u);
    for (const auto& w : cfg_.as_weights) weights_.push_back(w.weight);
}

SourcePick ScannerPool::pick_source() {
    // Both draws happen on every call so the stream position does not depend
    // on which branch was taken.
    const bool master = rng_.bernoulli(cfg_.master_probability);
    const std::size_t as_index = rng_.weighted_index(weights_);
    if (master) return SourcePick{cfg_.master_address, cfg_.master_as, true, false};

    SourcePick pick;
    std::uint32_t index;
    if (drawn_ < cfg_.pool_size) {
        const auto j = static_cast<std::uint32_t>(rng_.uniform_int(drawn_, cfg_.pool_size - 1));
        std::swap(order_[drawn_], order_[j]);
        index = order_[drawn_++];
        as_of_[index] = cfg_.as_weights[as_index].label;
        if (drawn_ == cfg_.pool_size) ++exhaustions_;
    } else {
        index = recycle_.front();
        recycle_.pop_front();
        pick.recycled = true;
    }
    recycle_.push_back(index);
    pick.address = Address{cfg_.first_pool_address.value + index};
    pick.as_label = as_of_[index];
    return pick;
}

std::vector<Address> ScannerPool::addresses() const {
    std::vector<Address> out;
    out.reserve(cfg_.pool_size + 1);
    out.push_back(cfg_.master_address);
    for (std::uint32_t i = 0; i < cfg_.pool_size; ++i) out.push_back(Address{cfg_.first_pool_address.value + i});
    return out;
}

}  // namespace gfcsim::scanner
