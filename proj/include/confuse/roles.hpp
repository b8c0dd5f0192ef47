#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confuse/llm/gateway.hpp"

namespace confuse {

// A model together with the sampling parameters used for its calls.
struct Role {
  llm::ModelRef model;
  llm::SamplingParams params;

  Role seeded(std::int64_t s) const { return {model, params.with_seed(s)}; }
  std::int64_t seed_or(std::int64_t fallback) const { return params.seed.value_or(fallback); }
};

// evaluated: the model under test. strong: the reference answerer used by
// dual answering and seed-pair labeling. judge: grading, distinctness and
// clustering. user_sim: the simulated user. generators: seed-pair inquirers.
struct ModelSet {
  Role evaluated;
  Role strong;
  Role judge;
  Role user_sim;
  std::vector<Role> generators;
};

// Default sampling per use: sampled judgments need distinct draws, answers
// and grades are greedy.
inline llm::SamplingParams judging_params() { return {0.7, 512, std::nullopt}; }
inline llm::SamplingParams answering_params() { return {0.0, 512, std::nullopt}; }

}  // namespace confuse
