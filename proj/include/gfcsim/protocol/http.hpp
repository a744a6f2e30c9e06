#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "gfcsim/protocol/bytes.hpp"

namespace gfcsim::protocol {

struct HttpRequest {
    std::vector<std::uint8_t> method_line;
    std::vector<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>> headers;

    void add_header(std::string_view name, ByteView value) {
        headers.emplace_back(to_bytes(name), std::vector<std::uint8_t>(value.begin(), value.end()));
    }
};

/// `<method-line>\r\n` followed by `<name>: <value>\r\n` per header. No
/// trailing blank line is added.
std::vector<std::uint8_t> serialize_http(const HttpRequest& req);

/// "GET / HTTP/1.1", "Host: <host>", optionally "User-Agent: <agent>".
HttpRequest make_get(std::string_view host, ByteView user_agent = {}, std::string_view path = "/");

/// Splits a payload at CRLF boundaries; a trailing fragment without CRLF is
/// returned as the last line.
std::vector<ByteView> split_lines(ByteView payload);

std::vector<std::uint8_t> build_http_response(int status, std::string_view reason);
bool is_http_response(ByteView data);

}  // namespace gfcsim::protocol
