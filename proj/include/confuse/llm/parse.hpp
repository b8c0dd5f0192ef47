#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "confuse/core/types.hpp"
#include "confuse/llm/json_extract.hpp"
#include "confuse/util/text.hpp"

namespace confuse::llm {

inline std::string_view strip_decoration(std::string_view s) {
  auto junk = [](char c) { return !std::isalnum(static_cast<unsigned char>(c)); };
  while (!s.empty() && junk(s.front())) s.remove_prefix(1);
  while (!s.empty() && junk(s.back())) s.remove_suffix(1);
  return s;
}

// "A", " B.", "**C**" are accepted; anything longer is not a letter.
inline std::optional<UncertaintySource> parse_letter(std::string_view raw) {
  auto s = strip_decoration(raw);
  if (s.size() != 1) return std::nullopt;
  return source_from_letter(static_cast<char>(std::toupper(static_cast<unsigned char>(s[0]))));
}

inline std::optional<bool> parse_yes_no(const nlohmann::ordered_json& v) {
  if (v.is_boolean()) return v.get<bool>();
  const auto s = text::to_lower(strip_decoration(value_as_string(v)));
  if (s == "yes" || s == "true") return true;
  if (s == "no" || s == "false") return false;
  return std::nullopt;
}

inline std::optional<int> parse_score(const nlohmann::ordered_json& v, int lo, int hi) {
  int r = 0;
  if (v.is_number_integer()) {
    r = v.get<int>();
  } else if (v.is_number_float()) {
    double d = v.get<double>();
    if (d != static_cast<int>(d)) return std::nullopt;
    r = static_cast<int>(d);
  } else {
    auto s = strip_decoration(value_as_string(v));
    if (s.size() != 1 || !std::isdigit(static_cast<unsigned char>(s[0]))) return std::nullopt;
    r = s[0] - '0';
  }
  if (r < lo || r > hi) return std::nullopt;
  return r;
}

}  // namespace confuse::llm
