#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace confuse::llm {

// If the text holds a ``` fenced block, returns the inside of the first one
// (an info string such as "json" on the opening line is dropped).
inline std::string_view strip_fences(std::string_view s) {
  auto open = s.find("```");
  if (open == std::string_view::npos) return s;
  auto body = s.find('\n', open);
  if (body == std::string_view::npos) return s;
  auto close = s.find("```", body + 1);
  if (close == std::string_view::npos) return s.substr(body + 1);
  return s.substr(body + 1, close - body - 1);
}

// First balanced {...} span, honouring JSON string literals and escapes.
inline std::optional<std::string_view> first_object_span(std::string_view s) {
  auto start = s.find('{');
  if (start == std::string_view::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return s.substr(start, i - start + 1);
  }
  return std::nullopt;
}

// Parses the first JSON object out of free-form model output.
inline std::optional<nlohmann::ordered_json> extract_json_object(std::string_view raw) {
  auto span = first_object_span(strip_fences(raw));
  if (!span) span = first_object_span(raw);
  if (!span) return std::nullopt;
  auto parsed = nlohmann::ordered_json::parse(*span, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
  return parsed;
}

// Reads a value the model may have emitted either as a string or a number.
inline std::string value_as_string(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return {};
  return v.dump();
}

}  // namespace confuse::llm
