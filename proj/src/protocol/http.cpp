#include "gfcsim/protocol/http.hpp"

#include <string>

namespace gfcsim::protocol {

std::vector<std::uint8_t> serialize_http(const HttpRequest& req) {
    std::vector<std::uint8_t> out(req.method_line);
    out.push_back('\r');
    out.push_back('\n');
    for (const auto& [name, value] : req.headers) {
        out.insert(out.end(), name.begin(), name.end());
        out.push_back(':');
        out.push_back(' ');
        out.insert(out.end(), value.begin(), value.end());
        out.push_back('\r');
        out.push_back('\n');
    }
    return out;
}

HttpRequest make_get(std::string_view host, ByteView user_agent, std::string_view path) {
    HttpRequest req;
    req.method_line = to_bytes("GET " + std::string(path) + " HTTP/1.1");
    req.add_header("Host", to_bytes(host));
    if (!user_agent.empty()) req.add_header("User-Agent", user_agent);
    return req;
}

std::vector<ByteView> split_lines(ByteView payload) {
    std::vector<ByteView> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i + 1 < payload.size(); ++i) {
        if (payload[i] == '\r' && payload[i + 1] == '\n') {
            lines.push_back(payload.subspan(start, i - start));
            start = i + 2;
            ++i;
        }
    }
    if (start < payload.size()) lines.push_back(payload.subspan(start));
    return lines;
}

std::vector<std::uint8_t> build_http_response(int status, std::string_view reason) {
    return to_bytes("HTTP/1.1 " + std::to_string(status) + " " + std::string(reason) +
                    "\r\nContent-Length: 0\r\n\r\n");
}

bool is_http_response(ByteView data) { return starts_with(data, "HTTP/1."); }

}  // namespace gfcsim::protocol
