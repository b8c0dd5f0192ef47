#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "confuse/core/case_io.hpp"

namespace confuse::dpo {

enum class Provenance { Seed, OnPolicy, OnlineJudge };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Seed: return "seed";
    case Provenance::OnPolicy: return "on_policy";
    case Provenance::OnlineJudge: return "online_judge";
  }
  return "seed";
}

inline Provenance provenance_from_string(std::string_view s) {
  if (s == "seed") return Provenance::Seed;
  if (s == "on_policy") return Provenance::OnPolicy;
  if (s == "online_judge") return Provenance::OnlineJudge;
  throw ParameterError("unknown provenance '" + std::string(s) + "'");
}

struct PreferencePair {
  std::string case_id;
  std::string prompt;  // fully rendered inquiry-generation prompt
  std::string chosen;
  std::string rejected;
  Provenance provenance = Provenance::Seed;

  void validate() const {
    if (prompt.empty()) throw ParameterError("pair for '" + case_id + "' has an empty prompt");
    if (chosen == rejected) throw ParameterError("pair for '" + case_id + "' has chosen == rejected");
  }

  friend bool operator==(const PreferencePair&, const PreferencePair&) = default;
};

inline ojson to_json(const PreferencePair& p) {
  return ojson{{"case_id", p.case_id},
               {"prompt", p.prompt},
               {"chosen", p.chosen},
               {"rejected", p.rejected},
               {"provenance", std::string(to_string(p.provenance))}};
}

inline PreferencePair pair_from_json(const ojson& j) {
  if (!j.is_object()) throw ParameterError("pair must be a JSON object");
  PreferencePair p{confuse::detail::require_string(j, "case_id"), confuse::detail::require_string(j, "prompt"),
                   confuse::detail::require_string(j, "chosen"), confuse::detail::require_string(j, "rejected"),
                   provenance_from_string(confuse::detail::require_string(j, "provenance"))};
  p.validate();
  return p;
}

inline void write_pairs(const std::filesystem::path& path, const std::vector<PreferencePair>& pairs) {
  for (const auto& p : pairs) p.validate();
  write_jsonl(path, pairs, [](const PreferencePair& p) { return to_json(p); });
}

inline std::vector<PreferencePair> read_pairs(const std::filesystem::path& path) {
  return read_jsonl<PreferencePair>(path, [](const ojson& j) { return pair_from_json(j); });
}

}  // namespace confuse::dpo
