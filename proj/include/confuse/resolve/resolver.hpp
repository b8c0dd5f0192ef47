#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "confuse/eval/scoring.hpp"
#include "confuse/resolve/answer.hpp"
#include "confuse/retrieval/bm25.hpp"

namespace confuse::resolve {

inline constexpr int kUserSimTokens = 50;

inline bool is_beyond_scope(std::string_view reply) {
  return text::contains(text::to_lower(reply), "beyond scope");
}

// The simulated user knows the intent but not the answer. Replies are cut
// to 50 whitespace tokens; refusals become the fixed beyond-scope sentence.
inline std::string simulate_user(llm::Gateway& gw, const std::string& intention, const std::string& actual_query,
                                 const std::string& inquiry, const Role& user_sim) {
  for (const auto* s : {&intention, &actual_query, &inquiry}) {
    if (text::trim(*s).empty()) throw ParameterError("simulate_user: inputs must be non-empty");
  }
  auto p = prompts::render(prompts::kUserSimulator, {intention, actual_query, inquiry});
  std::string reply = gw.complete(user_sim.model, {llm::user(std::move(p))},
                                  user_sim.params.with_max_tokens(kUserSimTokens), "resolve.user");
  if (is_beyond_scope(reply)) return std::string(prompts::kBeyondScope);
  return text::truncate_tokens(reply, kUserSimTokens);
}

struct ResolveConfig {
  Role answerer;  // who writes the final answer
  Role user_sim;
  std::size_t k = 5;  // documents retrieved per inquiry
};

// Inquiry for a channel when the judgment carried none.
inline std::string fresh_inquiry(llm::Gateway& gw, const Case& c, UncertaintySource source, const Role& model) {
  auto tmpl = source == UncertaintySource::Document ? prompts::kInquiryForRetrieval : prompts::kInquiryForClarification;
  auto p = prompts::render(tmpl, {c.actual_query, prompts::render_documents(c.actual_documents)});
  return text::trim(gw.complete(model.model, {llm::user(std::move(p))}, model.params, "resolve.inquiry"));
}

// Single-round resolution: retrieval for Document, the simulated user for
// Ambiguity, plain step-by-step answering for Capability.
inline InteractionTranscript resolve(llm::Gateway& gw, const Case& c, const Judgment& judgment,
                                     const ResolveConfig& cfg, const retrieval::Corpus* corpus) {
  InteractionTranscript t;
  t.case_id = c.id;
  const auto source = judgment.predicted;

  if (source != UncertaintySource::Capability) {
    std::string inquiry = judgment.inquiry && !text::trim(*judgment.inquiry).empty()
                              ? *judgment.inquiry
                              : fresh_inquiry(gw, c, source, cfg.answerer);
    if (source == UncertaintySource::Document) {
      if (corpus == nullptr) throw ParameterError("retrieval channel for '" + c.id + "' needs a corpus");
      std::unordered_set<std::string> present;
      for (const auto& d : c.actual_documents) present.insert(d.doc_id);
      std::vector<Document> fresh;
      if (!corpus->empty()) {
        for (auto& hit : retrieval::search(*corpus, inquiry, corpus->size())) {
          if (fresh.size() >= cfg.k) break;
          if (present.count(hit.document.doc_id)) continue;
          fresh.push_back(std::move(hit.document));
        }
      }
      t.turns.push_back({Channel::Retrieval, inquiry, fresh.empty() ? "None" : prompts::render_documents(fresh)});
    } else {
      t.turns.push_back({Channel::User, inquiry, simulate_user(gw, c.original_query, c.actual_query, inquiry, cfg.user_sim)});
    }
  }

  t.final_answer = answer_query(gw, c, t, cfg.answerer, source == UncertaintySource::Capability);
  return t;
}

struct ScoredAnswer {
  std::string answer;
  double score = 0.0;
  bool from_strong = false;
};

// Both models answer from the same interaction; the better score wins and
// ties go to the evaluated model. A non-empty transcript answer is reused
// as the evaluated model's answer.
inline ScoredAnswer dual_answer(llm::Gateway& gw, const Case& c, const InteractionTranscript& t,
                                const Role& eval_model, const Role& strong_model, const Role& judge) {
  const bool cot = t.turns.empty();
  std::string a = !t.final_answer.empty() ? t.final_answer : answer_query(gw, c, t, eval_model, cot);
  std::string b = answer_query(gw, c, t, strong_model, cot, std::nullopt, "answer.strong");
  const double sa = eval::score_answer(gw, c, a, judge);
  const double sb = a == b ? sa : eval::score_answer(gw, c, b, judge);
  if (sb > sa) return {std::move(b), sb, true};
  return {std::move(a), sa, false};
}

}  // namespace confuse::resolve
