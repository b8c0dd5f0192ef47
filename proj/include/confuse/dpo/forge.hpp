#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "confuse/dpo/pairs.hpp"
#include "confuse/judge/judge.hpp"
#include "confuse/resolve/resolver.hpp"
#include "confuse/util/parallel.hpp"

namespace confuse::dpo {

enum class Verdict { Chosen, Rejected };

inline std::string_view to_string(Verdict v) { return v == Verdict::Chosen ? "chosen" : "rejected"; }

struct LabelResponse {
  Verdict verdict = Verdict::Rejected;
  std::string resolved_answer;
  double score = 0.0;
};

struct LabelConfig {
  Role answerer;  // answers after the interaction
  Role user_sim;
  Role judge;
  std::size_t k = 5;
  std::optional<double> threshold;  // default: per-dataset success threshold
};

inline LabelConfig label_config(const ModelSet& models, std::size_t k = 5) {
  return {models.strong, models.user_sim, models.judge, k, std::nullopt};
}

inline std::string pair_prompt(const Case& c) {
  return prompts::render(prompts::kGenerateInquiry, {c.actual_query, prompts::render_documents(c.actual_documents)});
}

// Runs the inquiry through the case's gold channel, answers and scores.
inline LabelResponse label_candidate(llm::Gateway& gw, const Case& c, const std::string& inquiry,
                                     const LabelConfig& cfg, const retrieval::Corpus* corpus) {
  if (text::trim(inquiry).empty()) throw ParameterError("label_candidate: inquiry must be non-empty");
  if (!c.label) throw ParameterError("label_candidate: case '" + c.id + "' is unlabeled");
  if (*c.label == UncertaintySource::Capability) {
    throw UnsupportedCaseError("case '" + c.id + "' is capability-labeled and has no interaction channel");
  }
  Judgment j;
  j.case_id = c.id;
  j.strategy = Strategy::Inquiry;
  j.predicted = *c.label;
  j.inquiry = inquiry;
  auto t = resolve::resolve(gw, c, j, {cfg.answerer, cfg.user_sim, cfg.k}, corpus);
  LabelResponse out;
  out.resolved_answer = t.final_answer;
  out.score = eval::score_answer(gw, c, t.final_answer, cfg.judge);
  out.verdict = out.score >= cfg.threshold.value_or(success_threshold(c.dataset)) ? Verdict::Chosen : Verdict::Rejected;
  return out;
}

// Per case: each generator proposes an inquiry which is then labeled. Only
// cases the answerer fails without an inquiry and solves with at least one
// qualify; every succeeding inquiry is paired against every failing one.
inline std::vector<PreferencePair> collect_seed_pairs(llm::Gateway& gw, const std::vector<Case>& cases,
                                                      const std::vector<Role>& generators, const LabelConfig& cfg,
                                                      const retrieval::Corpus* corpus, std::size_t jobs = 1) {
  if (generators.size() < 2) throw ParameterError("collect_seed_pairs needs at least two generator models");
  std::vector<std::vector<PreferencePair>> per_case(cases.size());
  parallel_for(cases.size(), jobs, [&](std::size_t i) {
    const Case& c = cases[i];
    if (!c.label || *c.label == UncertaintySource::Capability) return;
    const double threshold = cfg.threshold.value_or(success_threshold(c.dataset));

    auto baseline = resolve::answer_query(gw, c, {}, cfg.answerer, false, std::nullopt, "dpo.baseline");
    if (eval::score_answer(gw, c, baseline, cfg.judge) >= threshold) return;

    std::vector<std::string> good, bad;
    for (const auto& g : generators) {
      auto inquiry = judge::generate_inquiry(gw, c, g).inquiry;
      auto label = label_candidate(gw, c, inquiry, cfg, corpus);
      (label.verdict == Verdict::Chosen ? good : bad).push_back(std::move(inquiry));
    }
    const std::string prompt = pair_prompt(c);
    for (const auto& w : good) {
      for (const auto& l : bad) {
        if (w != l) per_case[i].push_back({c.id, prompt, w, l, Provenance::Seed});
      }
    }
  });
  std::vector<PreferencePair> out;
  for (auto& v : per_case) {
    for (auto& p : v) out.push_back(std::move(p));
  }
  return out;
}

// The judge picks the better of two inquiries without any interaction.
// Two unusable picks drop the pair; the skip is logged to std::clog.
inline std::optional<PreferencePair> pair_online(llm::Gateway& gw, const Case& c, const std::string& inquiry_a,
                                                 const std::string& inquiry_b, const Role& judge) {
  if (inquiry_a == inquiry_b) throw ParameterError("pair_online: inquiries must differ");
  auto p = prompts::render(prompts::kPairOnline,
                           {c.actual_query, prompts::render_documents(c.actual_documents), inquiry_a, inquiry_b});
  try {
    int better = llm::ask_value<int>(
        gw, judge.model, judge.params, std::move(p), "Better",
        [](const llm::Record& v) { return llm::parse_score(v, 1, 2); },
        "The value of \"Better\" must be \"1\" or \"2\". Respond with valid JSON only.", "dpo.online");
    const bool a_wins = better == 1;
    return PreferencePair{c.id, pair_prompt(c), a_wins ? inquiry_a : inquiry_b, a_wins ? inquiry_b : inquiry_a,
                          Provenance::OnlineJudge};
  } catch (const InvalidJudgmentError& e) {
    std::clog << "skip online pair for " << c.id << ": " << e.what() << '\n';
  } catch (const StructuredOutputError& e) {
    std::clog << "skip online pair for " << c.id << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

// Folds an on-policy label into the pair set. By default the new inquiry
// replaces the chosen (or rejected) side of the case's pairs; keep_both
// appends new pairs instead. Returns the number of pairs touched or added.
inline std::size_t apply_on_policy(std::vector<PreferencePair>& pairs, const Case& c, const std::string& inquiry,
                                   Verdict verdict, bool keep_both = false) {
  std::size_t touched = 0;
  std::vector<PreferencePair> added;
  for (auto& p : pairs) {
    if (p.case_id != c.id) continue;
    PreferencePair next = p;
    (verdict == Verdict::Chosen ? next.chosen : next.rejected) = inquiry;
    next.provenance = Provenance::OnPolicy;
    if (next.chosen == next.rejected) continue;
    if (keep_both) {
      added.push_back(std::move(next));
    } else {
      p = std::move(next);
    }
    ++touched;
  }
  for (auto& p : added) pairs.push_back(std::move(p));
  return touched;
}

}  // namespace confuse::dpo
