#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confuse/llm/ask.hpp"
#include "confuse/prompts.hpp"
#include "confuse/roles.hpp"

namespace confuse::judge {

inline constexpr double kRephraseOverlap = 0.9;

struct InquiryProposal {
  std::string inquiry;
  UncertaintySource choice = UncertaintySource::Capability;
};

enum class Uniqueness { Unique, Multiple };

struct UniquenessVerdict {
  Uniqueness verdict = Uniqueness::Unique;
  std::vector<std::string> probe_answers;  // preset first, then each probe
};

struct JudgeConfig {
  Role model;  // the model whose uncertainty is being judged
  Role judge;  // grader for rephrase and distinctness checks
  bool capability_by_prompt = true;
  int n_probes = 2;
};

// First two agree: that value; otherwise the third.
template <typename T>
T majority_vote(std::span<const T> samples) {
  if (samples.size() != 3) {
    throw ParameterError("majority_vote needs exactly 3 samples, got " + std::to_string(samples.size()));
  }
  return samples[0] == samples[1] ? samples[0] : samples[2];
}

template <typename T>
T majority_vote(const std::vector<T>& samples) {
  return majority_vote(std::span<const T>(samples));
}

inline UncertaintySource judge_by_prompt(llm::Gateway& gw, const Case& c, const Role& model) {
  std::vector<llm::Message> messages{llm::user(prompts::render(
      prompts::kJudgeSource, {c.actual_query, prompts::render_documents(c.actual_documents)}))};
  std::string first = gw.complete(model.model, messages, model.params, "judge.prompt");
  if (auto s = llm::parse_letter(first)) return *s;
  messages.push_back(llm::assistant(first));
  messages.push_back(llm::user(std::string(prompts::kJudgeSourceReask)));
  std::string second = gw.complete(model.model, messages, model.params, "judge.prompt.reask");
  if (auto s = llm::parse_letter(second)) return *s;
  throw InvalidJudgmentError("expected A, B or C twice, got '" + text::trim(first) + "' and '" +
                             text::trim(second) + "'");
}

// An inquiry that mostly restates the query cannot gather anything new.
inline bool restates_query(const std::string& inquiry, const std::string& query) {
  return text::token_overlap(inquiry, query) >= kRephraseOverlap;
}

inline InquiryProposal generate_inquiry(llm::Gateway& gw, const Case& c, const Role& model) {
  auto p = prompts::render(prompts::kGenerateInquiry,
                           {c.actual_query, prompts::render_documents(c.actual_documents)});
  auto rec = gw.complete_structured(model.model, {llm::user(std::move(p))}, model.params, {"Inquiry", "Choice"},
                                    "judge.inquiry");
  InquiryProposal out;
  out.inquiry = text::trim(llm::value_as_string(rec.at("Inquiry")));
  if (out.inquiry.empty()) throw InvalidJudgmentError("model returned an empty inquiry");
  auto choice = llm::parse_letter(llm::value_as_string(rec.at("Choice")));
  if (!choice) throw InvalidJudgmentError("invalid Choice " + rec.at("Choice").dump());
  out.choice = restates_query(out.inquiry, c.actual_query) ? UncertaintySource::Capability : *choice;
  return out;
}

// JSON array of the answers collected so far; empty when there are none.
inline std::string render_possible_answers(const std::vector<std::string>& answers) {
  if (answers.empty()) return "";
  nlohmann::json arr = answers;
  return arr.dump();
}

inline std::string answer_inquiry(llm::Gateway& gw, const Case& c, const std::string& inquiry,
                                  const std::vector<std::string>& possible, const Role& model,
                                  const std::string& purpose) {
  auto p = prompts::render(prompts::kAnswerInquiry, {c.actual_query, prompts::render_documents(c.actual_documents),
                                                     inquiry, render_possible_answers(possible)});
  auto rec = gw.complete_structured(model.model, {llm::user(std::move(p))}, model.params, {"Response"}, purpose);
  return text::trim(llm::value_as_string(rec.at("Response")));
}

inline bool judged_distinct(llm::Gateway& gw, const std::string& inquiry, const std::vector<std::string>& previous,
                            const std::string& candidate, const Role& judge) {
  auto p = prompts::render(prompts::kJudgeDistinct, {inquiry, render_possible_answers(previous), candidate});
  return llm::ask_value<bool>(
      gw, judge.model, judge.params, std::move(p), "Distinct",
      [](const llm::Record& v) { return llm::parse_yes_no(v); },
      "The value of \"Distinct\" must be \"yes\" or \"no\". Respond with valid JSON only.", "judge.distinct");
}

// Preset answer, then n_probes requests for a different answer. Multiple
// if any probe is judged distinct from everything before it; a probe that
// repeats an earlier answer byte for byte skips the judge.
inline UniquenessVerdict probe_answer_uniqueness(llm::Gateway& gw, const Case& c, const std::string& inquiry,
                                                 const Role& model, const Role& judge, int n_probes,
                                                 std::optional<std::string> preset = std::nullopt) {
  if (text::trim(inquiry).empty()) throw ParameterError("probe_answer_uniqueness: inquiry must be non-empty");
  if (n_probes < 1) throw ParameterError("n_probes must be positive");
  const auto base = model.seed_or(0);

  UniquenessVerdict out;
  out.probe_answers.push_back(preset ? *preset : answer_inquiry(gw, c, inquiry, {}, model, "judge.preset"));
  for (int i = 0; i < n_probes; ++i) {
    std::string probe = answer_inquiry(gw, c, inquiry, out.probe_answers, model.seeded(base + 1 + i), "judge.probe");
    bool repeat = std::find(out.probe_answers.begin(), out.probe_answers.end(), probe) != out.probe_answers.end();
    if (!repeat && judged_distinct(gw, inquiry, out.probe_answers, probe, judge)) {
      out.verdict = Uniqueness::Multiple;
    }
    out.probe_answers.push_back(std::move(probe));
  }
  return out;
}

// True when the inquiry answer reads as a direct answer to the query
// itself, i.e. the inquiry only restated the query.
inline bool check_rephrase(llm::Gateway& gw, const Case& c, const std::string& inquiry,
                           const std::string& inquiry_answer, const Role& judge) {
  if (text::trim(inquiry).empty() || text::trim(inquiry_answer).empty()) {
    throw ParameterError("check_rephrase: inquiry and answer must be non-empty");
  }
  auto p = prompts::render(prompts::kJudgeRephrase, {c.actual_query, inquiry_answer});
  return llm::ask_value<bool>(
      gw, judge.model, judge.params, std::move(p), "Coherent",
      [](const llm::Record& v) { return llm::parse_yes_no(v); },
      "The value of \"Coherent\" must be \"yes\" or \"no\". Respond with valid JSON only.", "judge.rephrase");
}

namespace detail {

inline std::vector<UncertaintySource> prompt_samples(llm::Gateway& gw, const Case& c, const Role& model) {
  const auto base = model.seed_or(0);
  std::vector<UncertaintySource> s;
  for (int i = 0; i < 3; ++i) s.push_back(judge_by_prompt(gw, c, model.seeded(base + i)));
  return s;
}

inline std::vector<InquiryProposal> inquiry_samples(llm::Gateway& gw, const Case& c, const Role& model, int n) {
  const auto base = model.seed_or(0);
  std::vector<InquiryProposal> s;
  for (int i = 0; i < n; ++i) s.push_back(generate_inquiry(gw, c, model.seeded(base + i)));
  return s;
}

template <typename Fn>
auto with_context(Strategy strategy, const Case& c, Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidJudgmentError& e) {
    throw InvalidJudgmentError(std::string(to_string(strategy)) + " judgment of '" + c.id + "': " + e.what());
  }
}

}  // namespace detail

inline Judgment judge_source(llm::Gateway& gw, const Case& c, Strategy strategy, const JudgeConfig& cfg) {
  Judgment j;
  j.case_id = c.id;
  j.strategy = strategy;

  return detail::with_context(strategy, c, [&] {
    if (strategy == Strategy::Prompt) {
      j.samples = detail::prompt_samples(gw, c, cfg.model);
      j.predicted = majority_vote(j.samples);
      return j;
    }

    if (strategy == Strategy::Inquiry) {
      auto props = detail::inquiry_samples(gw, c, cfg.model, 3);
      for (const auto& p : props) j.samples.push_back(p.choice);
      j.predicted = majority_vote(j.samples);
      for (const auto& p : props) {
        if (p.choice == j.predicted) {
          j.inquiry = p.inquiry;
          break;
        }
      }
      return j;
    }

    if (cfg.capability_by_prompt) {
      auto votes = detail::prompt_samples(gw, c, cfg.model);
      if (majority_vote(votes) == UncertaintySource::Capability) {
        j.samples = std::move(votes);
        j.predicted = UncertaintySource::Capability;
        j.inquiry = generate_inquiry(gw, c, cfg.model).inquiry;
        return j;
      }
    }

    auto props = detail::inquiry_samples(gw, c, cfg.model, 2);
    j.samples = {props[0].choice, props[1].choice};
    j.inquiry = props[0].inquiry;
    if (props[0].choice == props[1].choice) {
      j.predicted = props[0].choice;
      return j;
    }

    std::string preset = answer_inquiry(gw, c, props[0].inquiry, {}, cfg.model, "judge.preset");
    if (check_rephrase(gw, c, props[0].inquiry, preset, cfg.judge)) {
      j.predicted = UncertaintySource::Capability;
      j.inquiry_answers = {preset};
      return j;
    }
    auto verdict = probe_answer_uniqueness(gw, c, props[0].inquiry, cfg.model, cfg.judge, cfg.n_probes, preset);
    j.predicted = verdict.verdict == Uniqueness::Multiple ? UncertaintySource::Ambiguity : UncertaintySource::Document;
    j.inquiry_answers = std::move(verdict.probe_answers);
    return j;
  });
}

}  // namespace confuse::judge
