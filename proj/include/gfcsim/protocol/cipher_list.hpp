#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace gfcsim::protocol {

/// Cipher-suite list sent by Tor clients in their TLS client hello. The DPI
/// fingerprint, the client hello and the evasion tests all refer to this one
/// constant.
inline constexpr std::array<std::uint8_t, 58> kTorCipherList = {
    0xc0, 0x0a, 0xc0, 0x14, 0x00, 0x39, 0x00, 0x38, 0xc0, 0x0f, 0xc0, 0x05, 0x00, 0x35, 0xc0, 0x07,
    0xc0, 0x09, 0xc0, 0x11, 0xc0, 0x13, 0x00, 0x33, 0x00, 0x32, 0xc0, 0x0c, 0xc0, 0x0e, 0xc0, 0x02,
    0xc0, 0x04, 0x00, 0x04, 0x00, 0x05, 0x00, 0x2f, 0xc0, 0x08, 0xc0, 0x12, 0x00, 0x16, 0x00, 0x13,
    0xc0, 0x0d, 0xc0, 0x03, 0xfe, 0xff, 0x00, 0x0a, 0x00, 0xff,
};

inline constexpr std::span<const std::uint8_t> tor_cipher_list() { return kTorCipherList; }

}  // namespace gfcsim::protocol
