#include <regex>

#include <httplib.h>

#include "mrbench/error.hpp"
#include "mrbench/llm.hpp"

namespace mrbench::llm {

namespace {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;    // without trailing slash
};

Endpoint split_url(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, re)) throw PreconditionError("malformed LLM endpoint URL '" + url + "'");
    std::string path = m[2].str();
    while (!path.empty() && path.back() == '/') path.pop_back();
    return {m[1].str(), path};
}

}  // namespace

HttpTransport::HttpTransport(std::string base_url, std::string api_key, std::chrono::seconds timeout)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), timeout_(timeout) {
    const auto ep = split_url(base_url_);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (ep.origin.rfind("https://", 0) == 0)
        throw PreconditionError("this build has no TLS support; use an http:// endpoint");
#endif
}

ChatResponse HttpTransport::send(const ChatRequest& request) {
    const auto ep = split_url(base_url_);
    httplib::Client client(ep.origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    const httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
    auto res = client.Post(ep.path + "/chat/completions", headers, request.to_json().dump(), "application/json");
    if (!res) throw TransportError("request to " + base_url_ + " failed: " + httplib::to_string(res.error()), true);
    if (res->status == 429 || res->status >= 500)
        throw TransportError("endpoint returned HTTP " + std::to_string(res->status), true, res->status);
    if (res->status != 200)
        throw TransportError("endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200),
                             false, res->status);
    nlohmann::json body;
    try {
        body = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("chat completion", e.what());
    }
    return parse_chat_completion(body);
}

}  // namespace mrbench::llm
