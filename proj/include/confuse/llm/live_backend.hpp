#pragma once

// OpenAI-compatible chat-completions transport. Kept out of gateway.hpp so
// only the CLI and the live-endpoint tests pay for cpp-httplib.

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <regex>
#include <string>

#include <nlohmann/json.hpp>

#include "confuse/llm/backend.hpp"

namespace confuse::llm {

struct Endpoint {
  std::string origin;     // scheme://host[:port]
  std::string base_path;  // path prefix without trailing slash
};

inline Endpoint parse_endpoint(const std::string& url) {
  static const std::regex re(R"(^([A-Za-z][A-Za-z0-9+.\-]*://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ParameterError("endpoint is not an absolute URL: " + url);
  std::string path = m[2].matched ? m[2].str() : std::string{};
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {m[1].str(), path};
}

inline nlohmann::json chat_request_body(const Request& r) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : r.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  nlohmann::json body{{"model", r.model.name},
                      {"messages", messages},
                      {"temperature", r.params.temperature},
                      {"max_tokens", r.params.max_tokens}};
  if (r.params.seed) body["seed"] = *r.params.seed;
  return body;
}

class LiveBackend : public Backend {
 public:
  explicit LiveBackend(std::chrono::seconds timeout = std::chrono::seconds(120)) : timeout_(timeout) {}

  std::string generate(const Request& request, const std::string&) override {
    const Endpoint ep = parse_endpoint(request.model.endpoint);
    httplib::Client client(ep.origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);

    httplib::Headers headers;
    if (!request.model.api_key_env.empty()) {
      if (const char* key = std::getenv(request.model.api_key_env.c_str())) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
      }
    }
    auto res = client.Post(ep.base_path + "/chat/completions", headers,
                           chat_request_body(request).dump(), "application/json");
    if (!res) {
      throw TransportError("request to " + request.model.endpoint + " failed: " +
                           httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw TransportError("HTTP " + std::to_string(res->status) + " from " + request.model.endpoint,
                           res->status);
    }
    auto body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded()) throw TransportError("non-JSON body from " + request.model.endpoint, 502);
    try {
      const auto& content = body.at("choices").at(0).at("message").at("content");
      return content.is_string() ? content.get<std::string>() : std::string{};
    } catch (const nlohmann::json::exception&) {
      throw TransportError("unexpected response shape from " + request.model.endpoint, 502);
    }
  }

  BackendKind kind() const override { return BackendKind::Live; }
  bool retryable() const override { return true; }

 private:
  std::chrono::seconds timeout_;
};

}  // namespace confuse::llm
