#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace gfcsim::protocol {

using ByteView = std::span<const std::uint8_t>;

inline std::vector<std::uint8_t> to_bytes(std::string_view s) { return {s.begin(), s.end()}; }

inline bool contains(ByteView haystack, ByteView needle) {
    if (needle.empty()) return true;
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

inline std::size_t count_occurrences(ByteView haystack, ByteView needle) {
    if (needle.empty() || needle.size() > haystack.size()) return 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
    }
    return n;
}

inline bool starts_with(ByteView data, std::string_view prefix) {
    return data.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), data.begin(),
                                                      [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; });
}

}  // namespace gfcsim::protocol
