#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "confuse/eval/metrics.hpp"

namespace testing_support {

// Per-dataset UCA of one strategy, HotpotQA..ToolBench, as published.
using Row = std::array<double, 5>;
inline constexpr Row kPromptRow = {0.531, 0.377, 0.477, 0.400, 0.685};
inline constexpr Row kAnswerRow = {0.600, 0.585, 0.562, 0.515, 0.769};
inline constexpr int kCasesPerDataset = 130;
inline constexpr int kRepeats = 3;

// Per-case rows realising the row: over 130 cases x 3 repeats each value
// pins down a unique count of correct predictions, round(v * 390).
inline confuse::eval::MetricsReport replay(const Row& row) {
  using namespace confuse;
  static constexpr Dataset ds[5] = {Dataset::HotpotQA, Dataset::AmbigQA, Dataset::TechQA, Dataset::ExpertQA,
                                    Dataset::ToolBench};
  eval::MetricsReport r;
  r.strategy = Strategy::Answer;
  r.repeats = kRepeats;
  const int total = kCasesPerDataset * kRepeats;
  for (std::size_t d = 0; d < 5; ++d) {
    int correct = static_cast<int>(std::lround(row[d] * total));
    for (int rep = 0; rep < kRepeats; ++rep) {
      for (int i = 0; i < kCasesPerDataset; ++i) {
        eval::CaseRow c;
        c.repeat = rep;
        c.case_id = std::to_string(d) + ":" + std::to_string(i);
        c.dataset = ds[d];
        c.label = kAllSources[static_cast<std::size_t>(i % 3)];
        c.predicted = c.label;
        if (correct > 0) {
          --correct;
        } else {
          c.predicted = kAllSources[static_cast<std::size_t>((i + 1) % 3)];
        }
        r.per_case.push_back(c);
      }
    }
  }
  eval::summarize(r);
  return r;
}

}  // namespace testing_support
