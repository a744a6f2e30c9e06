#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gfcsim/protocol/bytes.hpp"

namespace gfcsim::protocol {

using Bytes = std::vector<std::uint8_t>;

enum class Transport : std::uint8_t { plain_tor, obfuscated, http, spa_guarded };

std::string_view to_string(Transport t);
std::optional<Transport> parse_transport(std::string_view s);

// Client hello layout (71 bytes):
//   [0..5)   record header   16 03 01 00 42
//   [5..9)   handshake hdr   01 00 00 3e
//   [9..11)  client version  03 01
//   [11..69) Tor cipher list
//   [69..71) trailer         01 00  (one compression method: null)
// Only the cipher list is Tor-specific; the surrounding bytes are fixed
// TLS-shaped constants.
inline constexpr std::size_t kClientHelloPreamble = 11;
inline constexpr std::size_t kClientHelloTrailer = 2;
inline constexpr std::size_t kClientHelloSize = 71;

enum class RecordType : std::uint8_t { handshake = 0x16, application = 0x17 };

inline constexpr std::uint8_t kHandshakeClientHello = 0x01;
inline constexpr std::uint8_t kHandshakeServerHello = 0x02;

/// First body byte of the application records that stand in for Tor's
/// renegotiation and circuit setup.
enum class TorMessage : std::uint8_t { renegotiate = 0x01, renegotiated = 0x02, create = 0x03, created = 0x04 };

Bytes make_record(RecordType type, ByteView body);

/// Plain Tor client hello. For the obfuscated transport use
/// build_client_hello(Transport::obfuscated, key).
Bytes build_client_hello();
/// Throws std::invalid_argument for transports other than plain-tor and
/// obfuscated, or an obfuscated request without a key.
Bytes build_client_hello(Transport transport, ByteView session_key = {});

/// TLS-shaped hello with an ordinary browser cipher list (no Tor fingerprint).
Bytes build_browser_hello();
Bytes build_server_hello();
Bytes build_tor_message(TorMessage m);

struct Record {
    RecordType type;
    Bytes body;
};

/// Reassembles records from an in-order byte stream.
class RecordReader {
public:
    void feed(ByteView bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }
    /// Next complete record, nullopt if more bytes are needed or input is malformed.
    std::optional<Record> next();
    bool malformed() const { return malformed_; }

private:
    Bytes buf_;
    bool malformed_ = false;
};

}  // namespace gfcsim::protocol
