#include "gfcsim/simnet/address.hpp"

#include <charconv>

namespace gfcsim {

namespace {

std::optional<std::uint32_t> parse_uint(std::string_view s, std::uint32_t max) {
    if (s.empty()) return std::nullopt;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v > max) return std::nullopt;
    return v;
}

}  // namespace

std::string Address::str() const {
    return std::to_string(value >> 24) + '.' + std::to_string((value >> 16) & 0xff) + '.' +
           std::to_string((value >> 8) & 0xff) + '.' + std::to_string(value & 0xff);
}

std::optional<Address> Address::parse(std::string_view text) {
    std::uint32_t out = 0;
    for (int i = 0; i < 4; ++i) {
        auto dot = text.find('.');
        if ((i < 3) == (dot == std::string_view::npos)) return std::nullopt;
        auto octet = parse_uint(text.substr(0, dot), 255);
        if (!octet) return std::nullopt;
        out = (out << 8) | *octet;
        text = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    }
    return Address{out};
}

std::string Tuple::str() const { return addr.str() + ':' + std::to_string(port); }

std::optional<Tuple> Tuple::parse(std::string_view text) {
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto addr = Address::parse(text.substr(0, colon));
    auto port = parse_uint(text.substr(colon + 1), 65535);
    if (!addr || !port) return std::nullopt;
    return Tuple{*addr, static_cast<std::uint16_t>(*port)};
}

}  // namespace gfcsim
