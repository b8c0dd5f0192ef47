#include <gtest/gtest.h>

#include "e2e_cli.hpp"
#include "tmpdir.hpp"

using namespace testing_support;

namespace {

const nlohmann::json& row(const nlohmann::json& report, const std::string& id) {
  for (const auto& r : report.at("per_case")) {
    if (r.at("case_id") == id) return r;
  }
  throw std::runtime_error("missing row " + id);
}

}  // namespace

TEST(Cli, EvalIsByteIdenticalAcrossRuns) {
  TempDir dir("cli-eval");
  auto [a, b] = eval_twice(dir.path());
  EXPECT_EQ(a, b);
  auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j.at("per_case").size(), 36u);
  EXPECT_EQ(row(j, "yoga").at("channel"), "user");
  EXPECT_EQ(row(j, "yoga").at("aq"), 1.0);
  EXPECT_EQ(row(j, "mutrux").at("channel"), "retrieval");
  EXPECT_EQ(row(j, "mutrux").at("aq"), 1.0);
}

TEST(Cli, JobsDoNotChangeTheReport) {
  TempDir one("cli-j1"), four("cli-j4");
  write_e2e(one.path(), e2e_fixture(), 1);
  write_e2e(four.path(), e2e_fixture(), 4);
  for (auto* d : {&one, &four}) {
    ASSERT_EQ(run_cli({"index", "--corpus", (*d / "corpus.jsonl").string(), "--out", (*d / "corpus.idx").string()}).code, 0);
    ASSERT_EQ(run_cli({"eval", "--config", (*d / "config.json").string(), "--out", (*d / "r.json").string()}).code, 0);
  }
  EXPECT_EQ(slurp(one / "r.json"), slurp(four / "r.json"));
}

TEST(Cli, DryRunMakesNoReport) {
  TempDir dir("cli-dry");
  write_e2e(dir.path(), e2e_fixture());
  ASSERT_EQ(run_cli({"index", "--corpus", (dir / "corpus.jsonl").string(), "--out", (dir / "corpus.idx").string()}).code, 0);
  auto r = run_cli({"eval", "--config", (dir / "config.json").string(), "--dry-run", "--out", (dir / "r.json").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has(r.out, "12 cases, 3 repeats"));
  EXPECT_FALSE(std::filesystem::exists(dir / "r.json"));
}

TEST(Cli, JudgeThenReport) {
  TempDir dir("cli-judge");
  write_e2e(dir.path(), e2e_fixture());
  auto r = run_cli({"judge", "--config", (dir / "config.json").string(), "--strategy", "prompt", "--out",
                (dir / "j.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has(slurp(dir / "j.jsonl"), "\"case_id\":\"yoga\""));

  ASSERT_EQ(run_cli({"index", "--corpus", (dir / "corpus.jsonl").string(), "--out", (dir / "corpus.idx").string()}).code, 0);
  ASSERT_EQ(run_cli({"eval", "--config", (dir / "config.json").string(), "--repeats", "1", "--out",
                 (dir / "r.json").string()})
                .code,
            0);
  auto rep = run_cli({"report", "--in", (dir / "r.json").string()});
  EXPECT_EQ(rep.code, 0);
  EXPECT_TRUE(has(rep.out, "AmbigQA"));
  EXPECT_TRUE(has(rep.out, "average"));
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"eval", "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({"eval"}).code, 2);
  EXPECT_EQ(run_cli({"eval", "--config", "c.json", "--strategy", "vote"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, RuntimeErrorsExitOne) {
  TempDir dir("cli-err");
  auto r = run_cli({"eval", "--config", (dir / "nope.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has(r.err, "nope.json"));

  write_e2e(dir.path(), e2e_fixture());
  r = run_cli({"eval", "--config", (dir / "config.json").string(), "--out", (dir / "r.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has(r.err, "corpus.idx"));
}
