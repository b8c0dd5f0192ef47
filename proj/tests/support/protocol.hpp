#pragma once

#include "confuse/judge/judge.hpp"
#include "fixtures.hpp"

namespace testing_support {

struct ProtocolOutcome {
  char first = 'A';
  char second = 'A';
  std::size_t probe_calls = 0;
  std::size_t preset_calls = 0;
  Judgment judgment;
};

// Scripted Answer-strategy run: prompt votes never say C, the two inquiry
// samples answer with the given letters, the rephrase check says no and
// every probe is distinct.
inline ProtocolOutcome run_answer_protocol(char first, char second, int n_probes = 2) {
  Sandbox s;
  s.on(Kind::JudgeSource, [](const llm::Request&, const std::string&) { return std::optional<std::string>("A"); });
  s.on(Kind::GenerateInquiry, [=](const llm::Request& r, const std::string&) {
    const char c = r.params.seed.value_or(0) % 2 == 0 ? first : second;
    return std::optional<std::string>(reply({{"Inquiry", "Which record is meant?"}, {"Choice", std::string(1, c)}}));
  });
  s.on(Kind::AnswerInquiry, [](const llm::Request& r, const std::string&) {
    return std::optional<std::string>(reply({{"Response", "answer " + std::to_string(r.params.seed.value_or(-1))}}));
  });
  s.always(Kind::Rephrase, yes_no("Coherent", false));
  s.always(Kind::Distinct, yes_no("Distinct", true));

  Case c = mutrux_case();
  judge::JudgeConfig cfg{role("evaluated", judging_params()).seeded(10), role("judge"), true, n_probes};
  ProtocolOutcome out;
  out.first = first;
  out.second = second;
  out.judgment = judge::judge_source(s.gw(), c, Strategy::Answer, cfg);
  out.probe_calls = s.gw().count_calls("judge.probe");
  out.preset_calls = s.gw().count_calls("judge.preset");
  return out;
}

}  // namespace testing_support
