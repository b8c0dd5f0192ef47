#pragma once

#include <string>
#include <vector>

#include "confuse/eval/metrics.hpp"
#include "confuse/judge/judge.hpp"
#include "confuse/resolve/resolver.hpp"
#include "confuse/util/parallel.hpp"

namespace confuse::eval {

struct EvalConfig {
  ModelSet models;
  llm::SamplingParams judging = judging_params();  // evaluated model while judging
  bool capability_by_prompt = true;
  int n_probes = 2;
  int repeats = 3;
  std::uint64_t seed = 0;
  std::size_t k = 5;
  std::size_t jobs = 1;
  double max_failure_fraction = 0.1;
};

// judge -> resolve -> dual answer -> score, for one case and repeat.
inline CaseRow evaluate_case(llm::Gateway& gw, const Case& c, Strategy strategy, const EvalConfig& cfg,
                             const retrieval::Corpus* corpus, int repeat) {
  const auto seed = static_cast<std::int64_t>(cfg.seed) + repeat;
  CaseRow row;
  row.repeat = repeat;
  row.case_id = c.id;
  row.dataset = c.dataset;
  row.label = *c.label;

  judge::JudgeConfig jc{{cfg.models.evaluated.model, cfg.judging.with_seed(seed)},
                        cfg.models.judge,
                        cfg.capability_by_prompt,
                        cfg.n_probes};
  Judgment j = judge::judge_source(gw, c, strategy, jc);
  row.predicted = j.predicted;
  row.samples = j.samples;

  resolve::ResolveConfig rc{cfg.models.evaluated.seeded(seed), cfg.models.user_sim, cfg.k};
  InteractionTranscript t = resolve::resolve(gw, c, j, rc, corpus);
  row.channel = t.channel();
  row.inquiry = t.turns.empty() ? j.inquiry : std::optional<std::string>(t.turns.front().inquiry);

  auto best = resolve::dual_answer(gw, c, t, rc.answerer, cfg.models.strong, cfg.models.judge);
  row.answer = best.answer;
  row.answered_by_strong = best.from_strong;
  row.aq = best.score;
  if (c.gold_inquiry && row.inquiry) row.iq = score_inquiry(gw, c, *row.inquiry, cfg.models.judge);
  return row;
}

// Repeats use seeds seed, seed+1, ...; failed cases are recorded with their
// error and excluded. A repeat with more than max_failure_fraction failed
// cases aborts the run.
inline MetricsReport run_eval(llm::Gateway& gw, const std::vector<Case>& bench, Strategy strategy,
                              const EvalConfig& cfg, const retrieval::Corpus* corpus) {
  if (bench.empty()) throw ParameterError("run_eval: benchmark is empty");
  if (cfg.repeats < 1) throw ParameterError("repeats must be >= 1");
  for (const auto& c : bench) {
    if (!c.label) throw ParameterError("run_eval: case '" + c.id + "' has no label");
  }

  MetricsReport report;
  report.strategy = strategy;
  report.repeats = cfg.repeats;
  report.seed = cfg.seed;
  for (int r = 0; r < cfg.repeats; ++r) {
    std::vector<CaseRow> rows(bench.size());
    parallel_for(bench.size(), cfg.jobs, [&](std::size_t i) {
      try {
        rows[i] = evaluate_case(gw, bench[i], strategy, cfg, corpus, r);
      } catch (const std::exception& e) {
        CaseRow failed;
        failed.repeat = r;
        failed.case_id = bench[i].id;
        failed.dataset = bench[i].dataset;
        failed.label = *bench[i].label;
        failed.error = e.what();
        rows[i] = std::move(failed);
      }
    });
    std::size_t failed = 0;
    for (const auto& row : rows) failed += row.error.has_value();
    if (static_cast<double>(failed) > cfg.max_failure_fraction * static_cast<double>(bench.size())) {
      std::string first;
      for (const auto& row : rows) {
        if (row.error) {
          first = row.case_id + ": " + *row.error;
          break;
        }
      }
      throw Error("repeat " + std::to_string(r) + " aborted: " + std::to_string(failed) + " of " +
                  std::to_string(bench.size()) + " cases failed (first: " + first + ")");
    }
    for (auto& row : rows) report.per_case.push_back(std::move(row));
  }
  summarize(report);
  return report;
}

}  // namespace confuse::eval
