#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace gfcsim {

/// IPv4-style address. Only used as an opaque label inside the simulator.
struct Address {
    std::uint32_t value = 0;

    constexpr auto operator<=>(const Address&) const = default;

    std::string str() const;
    static std::optional<Address> parse(std::string_view text);
};

/// An IP:port tuple, the unit of blocking.
struct Tuple {
    Address addr;
    std::uint16_t port = 0;

    constexpr auto operator<=>(const Tuple&) const = default;

    std::string str() const;
    static std::optional<Tuple> parse(std::string_view text);
};

}  // namespace gfcsim

template <>
struct std::hash<gfcsim::Address> {
    std::size_t operator()(const gfcsim::Address& a) const noexcept { return std::hash<std::uint32_t>{}(a.value); }
};

template <>
struct std::hash<gfcsim::Tuple> {
    std::size_t operator()(const gfcsim::Tuple& t) const noexcept {
        return std::hash<std::uint64_t>{}((std::uint64_t{t.addr.value} << 16) | t.port);
    }
};
