#pragma once

#include <optional>
#include <string>

#include "confuse/prompts.hpp"
#include "confuse/roles.hpp"

namespace confuse::resolve {

// Answers case.actual_query from its documents and the transcript turns.
// The plain variant requests the dataset budget (50 or 500 tokens) unless
// `max_tokens` overrides it; the step-by-step variant keeps the role's own
// token limit.
inline std::string answer_query(llm::Gateway& gw, const Case& c, const InteractionTranscript& t,
                                const Role& model, bool cot,
                                std::optional<int> max_tokens = std::nullopt,
                                const std::string& purpose = "answer") {
  const std::string docs = prompts::render_documents(c.actual_documents);
  const std::string history = prompts::render_history(t.turns);
  if (cot) {
    auto p = prompts::render(prompts::kAnswerQueryCot, {c.actual_query, docs, c.actual_query, history});
    return gw.complete(model.model, {llm::user(std::move(p))}, model.params, purpose + ".cot");
  }
  const int budget = max_tokens.value_or(answer_token_budget(c.dataset));
  auto p = prompts::render(prompts::kAnswerQuery,
                           {c.actual_query, docs, c.actual_query, history, std::to_string(budget)});
  return gw.complete(model.model, {llm::user(std::move(p))}, model.params.with_max_tokens(budget), purpose);
}

}  // namespace confuse::resolve
