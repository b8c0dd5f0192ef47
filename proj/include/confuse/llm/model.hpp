#pragma once

#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "confuse/error.hpp"

namespace confuse::llm {

// Opaque handle to a chat model: deployment name plus where to reach it.
struct ModelRef {
  std::string name;
  std::string endpoint = "scripted://local";
  std::string api_key_env;

  void validate() const {
    if (name.empty()) throw ParameterError("model name must be non-empty");
    static const std::regex absolute_url(R"(^[A-Za-z][A-Za-z0-9+.\-]*://[^/\s]+.*$)");
    if (!std::regex_match(endpoint, absolute_url)) {
      throw ParameterError("model '" + name + "' endpoint is not an absolute URL: " + endpoint);
    }
  }

  friend bool operator==(const ModelRef&, const ModelRef&) = default;
};

struct SamplingParams {
  double temperature = 0.0;
  int max_tokens = 512;
  std::optional<std::int64_t> seed;

  void validate() const {
    if (!(temperature >= 0.0 && temperature <= 2.0)) {
      throw ParameterError("temperature must be in [0, 2]");
    }
    if (max_tokens <= 0 || max_tokens > 32768) {
      throw ParameterError("max_tokens must be in [1, 32768]");
    }
  }

  SamplingParams with_seed(std::int64_t s) const {
    SamplingParams p = *this;
    p.seed = s;
    return p;
  }
  SamplingParams with_max_tokens(int n) const {
    SamplingParams p = *this;
    p.max_tokens = n;
    return p;
  }

  friend bool operator==(const SamplingParams&, const SamplingParams&) = default;
};

struct Message {
  std::string role;
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

inline Message user(std::string content) { return {"user", std::move(content)}; }
inline Message assistant(std::string content) { return {"assistant", std::move(content)}; }

struct Request {
  ModelRef model;
  std::vector<Message> messages;
  SamplingParams params;
  // Free-form tag for call logs ("judge.prompt", "resolve.user", ...). Not
  // part of the fingerprint.
  std::string purpose;
};

}  // namespace confuse::llm
