#include "gfcsim/evasion/fragment.hpp"

#include <algorithm>
#include <stdexcept>

namespace gfcsim::evasion {

std::vector<Bytes> fragment_stream(protocol::ByteView payload, std::size_t mss) {
    if (mss == 0) throw std::invalid_argument("fragment size must be at least 1");
    std::vector<Bytes> out;
    out.reserve((payload.size() + mss - 1) / mss);
    for (std::size_t i = 0; i < payload.size(); i += mss) {
        const auto n = std::min(mss, payload.size() - i);
        out.emplace_back(payload.begin() + static_cast<std::ptrdiff_t>(i),
                         payload.begin() + static_cast<std::ptrdiff_t>(i + n));
    }
    return out;
}

}  // namespace gfcsim::evasion
