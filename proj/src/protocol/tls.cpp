#include "gfcsim/protocol/tls.hpp"

#include <stdexcept>

#include "gfcsim/protocol/cipher_list.hpp"
#include "gfcsim/protocol/obfuscation.hpp"

namespace gfcsim::protocol {

namespace {

constexpr std::uint16_t kMaxRecord = 16384;

// A common 2012-era browser list; deliberately unrelated to the Tor list.
constexpr std::uint8_t kBrowserCiphers[] = {0xc0, 0x2b, 0xc0, 0x2f, 0x00, 0x9e, 0xc0, 0x0a, 0xc0, 0x09,
                                            0xc0, 0x13, 0xc0, 0x14, 0x00, 0x33, 0x00, 0x39, 0x00, 0x2f,
                                            0x00, 0x35, 0x00, 0x0a};

Bytes hello_with(ByteView ciphers) {
    Bytes body;
    const auto len = static_cast<std::uint32_t>(2 + ciphers.size() + 2);
    body.push_back(kHandshakeClientHello);
    body.push_back(static_cast<std::uint8_t>(len >> 16));
    body.push_back(static_cast<std::uint8_t>(len >> 8));
    body.push_back(static_cast<std::uint8_t>(len));
    body.push_back(0x03);
    body.push_back(0x01);
    body.insert(body.end(), ciphers.begin(), ciphers.end());
    body.push_back(0x01);
    body.push_back(0x00);
    return make_record(RecordType::handshake, body);
}

}  // namespace

std::string_view to_string(Transport t) {
    switch (t) {
        case Transport::plain_tor: return "plain-tor";
        case Transport::obfuscated: return "obfuscated";
        case Transport::http: return "http";
        case Transport::spa_guarded: return "spa-guarded";
    }
    return "?";
}

std::optional<Transport> parse_transport(std::string_view s) {
    for (auto t : {Transport::plain_tor, Transport::obfuscated, Transport::http, Transport::spa_guarded}) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

Bytes make_record(RecordType type, ByteView body) {
    Bytes out{static_cast<std::uint8_t>(type), 0x03, 0x01, static_cast<std::uint8_t>(body.size() >> 8),
              static_cast<std::uint8_t>(body.size() & 0xff)};
    out.reserve(out.size() + body.size());
    for (auto b : body) out.push_back(b);
    return out;
}

Bytes build_client_hello() { return hello_with(kTorCipherList); }

Bytes build_client_hello(Transport transport, ByteView session_key) {
    switch (transport) {
        case Transport::plain_tor: return build_client_hello();
        case Transport::obfuscated:
            if (session_key.empty()) throw std::invalid_argument("obfuscated client hello needs a session key");
            return obfuscate(build_client_hello(), session_key);
        default: throw std::invalid_argument("client hello only exists for plain-tor and obfuscated transports");
    }
}

Bytes build_browser_hello() { return hello_with(kBrowserCiphers); }

Bytes build_server_hello() {
    const std::uint8_t body[] = {kHandshakeServerHello, 0x00, 0x00, 0x04, 0x03, 0x01, 0xc0, 0x0a};
    return make_record(RecordType::handshake, body);
}

Bytes build_tor_message(TorMessage m) {
    const std::uint8_t body[] = {static_cast<std::uint8_t>(m), 0, 0, 0, 0, 0, 0, 0};
    return make_record(RecordType::application, body);
}

std::optional<Record> RecordReader::next() {
    if (malformed_ || buf_.size() < 5) return std::nullopt;
    const std::uint8_t type = buf_[0];
    const std::uint16_t len = static_cast<std::uint16_t>((buf_[3] << 8) | buf_[4]);
    if ((type != 0x16 && type != 0x17) || buf_[1] != 0x03 || buf_[2] != 0x01 || len > kMaxRecord) {
        malformed_ = true;
        return std::nullopt;
    }
    if (buf_.size() < 5u + len) return std::nullopt;
    Record r{static_cast<RecordType>(type), Bytes(buf_.begin() + 5, buf_.begin() + 5 + len)};
    buf_.erase(buf_.begin(), buf_.begin() + 5 + len);
    return r;
}

}  // namespace gfcsim::protocol
