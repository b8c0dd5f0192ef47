#include <gtest/gtest.h>

#include "confuse/eval/evaluator.hpp"
#include "fixtures.hpp"

using namespace confuse;
using namespace testing_support;

namespace {

eval::EvalConfig config(int repeats = 1) {
  eval::EvalConfig c;
  c.models = model_set();
  c.repeats = repeats;
  c.seed = 7;
  return c;
}

const eval::CaseRow& row_for(const eval::MetricsReport& r, const std::string& id, int repeat = 0) {
  for (const auto& row : r.per_case) {
    if (row.case_id == id && row.repeat == repeat) return row;
  }
  throw std::runtime_error("no row " + id);
}

}  // namespace

TEST(RunEval, WorldCasesRouteAndResolve) {
  Sandbox s;
  auto f = e2e_fixture();
  install_rules(s, f.rules);
  auto corpus = retrieval::Corpus::ingest(f.corpus);
  auto report = eval::run_eval(s.gw(), f.bench, Strategy::Answer, config(2), &corpus);

  ASSERT_EQ(report.per_case.size(), 24u);
  EXPECT_EQ(report.errors, 0u);
  for (int r = 0; r < 2; ++r) {
    const auto& yoga = row_for(report, "yoga", r);
    EXPECT_EQ(yoga.predicted, UncertaintySource::Ambiguity);
    EXPECT_EQ(yoga.channel, Channel::User);
    EXPECT_DOUBLE_EQ(yoga.aq, 1.0);
    const auto& mutrux = row_for(report, "mutrux", r);
    EXPECT_EQ(mutrux.predicted, UncertaintySource::Document);
    EXPECT_EQ(mutrux.channel, Channel::Retrieval);
    EXPECT_DOUBLE_EQ(mutrux.aq, 1.0);
  }
  EXPECT_EQ(row_for(report, "zq04").predicted, UncertaintySource::Ambiguity);
  EXPECT_EQ(row_for(report, "zq07").aq, 0.0);
  EXPECT_EQ(report.per_repeat.size(), 2u);
  EXPECT_TRUE(report.averaged.count(Dataset::AmbigQA));
  EXPECT_LT(report.average.uca, 1.0);
  EXPECT_GT(report.average.uca, 0.5);
}

TEST(RunEval, SameSeedSameReport) {
  auto once = [](std::size_t jobs) {
    Sandbox s;
    auto f = e2e_fixture();
    install_rules(s, f.rules);
    auto corpus = retrieval::Corpus::ingest(f.corpus);
    auto cfg = config(2);
    cfg.jobs = jobs;
    return eval::to_json(eval::run_eval(s.gw(), f.bench, Strategy::Answer, cfg, &corpus)).dump();
  };
  EXPECT_EQ(once(1), once(3));
}

TEST(RunEval, FailedCasesBecomeErrorRows) {
  Sandbox s;
  auto f = e2e_fixture();
  install_rules(s, f.rules);
  s.on(Kind::JudgeSource, [](const llm::Request&, const std::string& p) -> std::optional<std::string> {
    if (has(p, "zq05")) throw TransportError("backend down", 400);
    return std::nullopt;
  });
  auto corpus = retrieval::Corpus::ingest(f.corpus);
  auto report = eval::run_eval(s.gw(), f.bench, Strategy::Prompt, config(), &corpus);
  EXPECT_EQ(report.errors, 1u);
  const auto& failed = row_for(report, "zq05");
  ASSERT_TRUE(failed.error);
  EXPECT_TRUE(has(*failed.error, "backend down"));
  EXPECT_TRUE(eval::to_json(failed).at("aq").is_null());
}

TEST(RunEval, TooManyFailuresAbort) {
  Sandbox s;
  auto f = e2e_fixture();
  install_rules(s, f.rules);
  s.on(Kind::JudgeSource, [](const llm::Request&, const std::string& p) -> std::optional<std::string> {
    if (has(p, "zq05") || has(p, "zq06")) throw TransportError("backend down", 400);
    return std::nullopt;
  });
  auto corpus = retrieval::Corpus::ingest(f.corpus);
  try {
    eval::run_eval(s.gw(), f.bench, Strategy::Prompt, config(), &corpus);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(has(e.what(), "2 of 12"));
  }
}

TEST(RunEval, RejectsBadInput) {
  Sandbox s;
  EXPECT_THROW(eval::run_eval(s.gw(), {}, Strategy::Prompt, config(), nullptr), ParameterError);
  auto c = yoga_case();
  c.label.reset();
  EXPECT_THROW(eval::run_eval(s.gw(), {c}, Strategy::Prompt, config(), nullptr), ParameterError);
  EXPECT_THROW(eval::run_eval(s.gw(), {yoga_case()}, Strategy::Prompt, config(0), nullptr), ParameterError);
}

TEST(RunEval, ReportJsonShape) {
  Sandbox s;
  install_world(s);
  auto corpus = retrieval::Corpus::ingest(world_corpus());
  auto j = eval::to_json(eval::run_eval(s.gw(), {yoga_case(), mutrux_case()}, Strategy::Prompt, config(), &corpus));
  for (const char* k : {"strategy", "repeats", "seed", "per_repeat", "averaged", "average", "errors", "per_case"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_EQ(j.at("strategy"), "prompt");
  EXPECT_EQ(j.at("per_case").size(), 2u);
}
