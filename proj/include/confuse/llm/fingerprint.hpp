#pragma once

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "confuse/llm/model.hpp"

namespace confuse::llm {

namespace detail {

inline void append_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void append_field(std::string& buf, std::string_view s) {
  append_u64(buf, s.size());
  buf.append(s);
}

inline std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace detail

// Stable request identity over raw bytes: model name, every message's role
// and content, temperature (IEEE bits), max_tokens and seed. Two requests
// collide only if all of those are byte-identical.
inline std::string fingerprint(const ModelRef& model, const std::vector<Message>& messages,
                               const SamplingParams& params) {
  std::string buf = "confuse-fp-v1";
  detail::append_field(buf, model.name);
  detail::append_u64(buf, messages.size());
  for (const auto& m : messages) {
    detail::append_field(buf, m.role);
    detail::append_field(buf, m.content);
  }
  detail::append_u64(buf, std::bit_cast<std::uint64_t>(params.temperature));
  detail::append_u64(buf, static_cast<std::uint64_t>(params.max_tokens));
  buf.push_back(params.seed ? '\1' : '\0');
  detail::append_u64(buf, static_cast<std::uint64_t>(params.seed.value_or(0)));
  return detail::sha256_hex(buf);
}

inline std::string fingerprint(const Request& r) {
  return fingerprint(r.model, r.messages, r.params);
}

}  // namespace confuse::llm
