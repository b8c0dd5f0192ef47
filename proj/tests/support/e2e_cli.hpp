#pragma once

#include <sstream>

#include "confuse/cli/run.hpp"
#include "fixtures.hpp"

namespace testing_support {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = confuse::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Indexes the corpus and runs `confuse eval` twice over the twelve-case
// benchmark; returns both reports.
inline std::pair<std::string, std::string> eval_twice(const std::filesystem::path& dir) {
  write_e2e(dir, e2e_fixture());
  const auto cfg = (dir / "config.json").string();
  auto idx = run_cli({"index", "--corpus", (dir / "corpus.jsonl").string(), "--out", (dir / "corpus.idx").string()});
  if (idx.code != 0) throw std::runtime_error("index failed: " + idx.err);
  std::string reports[2];
  for (int i = 0; i < 2; ++i) {
    const auto out = dir / ("report" + std::to_string(i) + ".json");
    auto r = run_cli({"eval", "--config", cfg, "--strategy", "answer", "--out", out.string()});
    if (r.code != 0) throw std::runtime_error("eval failed: " + r.err);
    reports[i] = slurp(out);
  }
  return {reports[0], reports[1]};
}

}  // namespace testing_support
