#pragma once

#include <optional>
#include <string>

#include "confuse/llm/ask.hpp"
#include "confuse/prompts.hpp"
#include "confuse/roles.hpp"

namespace confuse::eval {

inline double normalize_usefulness(int s) { return (s - 1) / 3.0; }
inline double normalize_inquiry_quality(int r) { return (r - 1) / 4.0; }

// QA sets: 1.0 when the judge deems the answer correct, else 0.0. Other
// sets: usefulness 1..4 mapped linearly onto [0, 1].
inline double score_answer(llm::Gateway& gw, const Case& c, const std::string& answer, const Role& judge) {
  if (text::trim(answer).empty()) throw ParameterError("score_answer: answer must be non-empty");
  if (is_qa(c.dataset)) {
    auto p = prompts::render(prompts::kJudgeCorrectness, {c.original_query, c.gold_answer, answer});
    bool ok = llm::ask_value<bool>(
        gw, judge.model, judge.params, std::move(p), "Correct",
        [](const llm::Record& v) { return llm::parse_yes_no(v); },
        "The value of \"Correct\" must be \"yes\" or \"no\". Respond with valid JSON only.", "score.correct");
    return ok ? 1.0 : 0.0;
  }
  auto p = prompts::render(prompts::kJudgeUsefulness, {c.original_query, c.gold_answer, answer});
  int s = llm::ask_value<int>(
      gw, judge.model, judge.params, std::move(p), "Usefulness",
      [](const llm::Record& v) { return llm::parse_score(v, 1, 4); },
      "The value of \"Usefulness\" must be one of 1, 2, 3, 4. Respond with valid JSON only.", "score.useful");
  return normalize_usefulness(s);
}

// Inquiry quality 1..5 against the stored gold inquiry, mapped onto [0, 1].
inline double score_inquiry(llm::Gateway& gw, const Case& c, const std::string& inquiry, const Role& judge) {
  if (!c.gold_inquiry) throw ParameterError("score_inquiry: case '" + c.id + "' has no gold inquiry");
  auto p = prompts::render(prompts::kEvaluateInquiry,
                           {c.original_query, prompts::render_documents(c.gold_documents), c.actual_query,
                            prompts::render_documents(c.actual_documents), *c.gold_inquiry, inquiry});
  int r = llm::ask_value<int>(
      gw, judge.model, judge.params, std::move(p), "quality of inquiry",
      [](const llm::Record& v) { return llm::parse_score(v, 1, 5); },
      "The value of \"quality of inquiry\" must be one of 1, 2, 3, 4, 5. Respond with valid JSON only.",
      "score.inquiry");
  return normalize_inquiry_quality(r);
}

}  // namespace confuse::eval
