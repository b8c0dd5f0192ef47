#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "confuse/bench/builder.hpp"
#include "confuse/cli/config.hpp"
#include "confuse/dpo/service.hpp"
#include "confuse/eval/evaluator.hpp"

namespace confuse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

struct Options {
  std::string config;
  bool dry_run = false;
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;

  std::string corpus, out, raw, quota, out_bench, out_train, bench, strategy = "answer", judgments, index, cases,
      in, host = "127.0.0.1", port_file;
  std::optional<int> repeats;
  int port = 8080;
};

inline void add_common(CLI::App* sub, Options& o, bool needs_config) {
  auto* c = sub->add_option("--config,--model,--models", o.config, "run configuration (JSON)");
  if (needs_config) c->required();
  sub->add_flag("--dry-run", o.dry_run, "validate configuration and inputs without model calls");
  sub->add_option("--jobs", o.jobs, "worker threads");
  sub->add_option("--seed", o.seed, "override the configured seed");
}

// Flag value, else the config's paths entry, else an error naming both.
inline std::filesystem::path input(const std::string& flag_value, const RunConfig* cfg, const std::string& key) {
  if (!flag_value.empty()) return flag_value;
  if (cfg) {
    if (auto p = cfg->path(key)) return *p;
  }
  throw ParameterError("missing --" + key + " (or paths." + key + " in the config)");
}

inline std::optional<std::filesystem::path> optional_input(const std::string& flag_value, const RunConfig* cfg,
                                                           const std::string& key) {
  if (!flag_value.empty()) return std::filesystem::path(flag_value);
  if (cfg) return cfg->path(key);
  return std::nullopt;
}

inline void require_file(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) throw Error("no such file: " + p.string());
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << s;
  if (!out) throw Error("write failed for " + p.string());
}

inline std::vector<Case> labeled(std::vector<Case> cases, const std::string& what) {
  for (const auto& c : cases) {
    if (!c.label) throw ParameterError(what + ": case '" + c.id + "' has no label");
  }
  return cases;
}

struct Runtime {
  RunConfig cfg;
  std::unique_ptr<llm::Gateway> gw;

  void connect() {
    if (!gw) gw = std::make_unique<llm::Gateway>(make_backend(cfg.backend), llm::RetryPolicy{}, cfg.max_in_flight);
  }
};

inline Runtime runtime(const Options& o) {
  Runtime rt{load_config(o.config), nullptr};
  if (o.jobs) rt.cfg.jobs = std::max<std::size_t>(1, *o.jobs);
  if (o.seed) rt.cfg.seed = *o.seed;
  return rt;
}

inline eval::EvalConfig eval_config(const RunConfig& cfg, std::optional<int> repeats) {
  eval::EvalConfig e;
  e.models = cfg.models;
  e.judging = cfg.judging;
  e.capability_by_prompt = cfg.capability_by_prompt;
  e.n_probes = cfg.n_probes;
  e.repeats = repeats.value_or(cfg.repeats);
  e.seed = cfg.seed;
  e.k = cfg.k;
  e.jobs = cfg.jobs;
  return e;
}

inline std::optional<retrieval::Corpus> maybe_index(const std::optional<std::filesystem::path>& p) {
  if (!p) return std::nullopt;
  return retrieval::load_index(*p);
}

inline int cmd_index(const Options& o, std::ostream& out) {
  retrieval::Bm25Params params;
  if (!o.config.empty()) params = load_config(o.config).bm25;
  auto docs = read_documents(o.corpus);
  auto corpus = retrieval::Corpus::ingest(std::move(docs), params);
  if (o.dry_run) {
    out << "ok: " << corpus.size() << " documents\n";
    return kExitOk;
  }
  retrieval::save_index(corpus, o.out);
  out << "indexed " << corpus.size() << " documents, " << corpus.vocabulary_size() << " terms -> " << o.out << "\n";
  return kExitOk;
}

inline int cmd_build(const Options& o, std::ostream& out) {
  auto rt = runtime(o);
  const auto raw_path = input(o.raw, &rt.cfg, "raw");
  const auto index_path = input(o.corpus, &rt.cfg, "index");
  const auto quota_path = input(o.quota, &rt.cfg, "quota");
  const auto bench_out = input(o.out_bench, &rt.cfg, "out_bench");
  const auto train_out = input(o.out_train, &rt.cfg, "out_train");
  auto raws = bench::read_raw_cases(raw_path);
  auto corpus = retrieval::load_index(index_path);
  require_file(quota_path);
  std::ifstream qin(quota_path);
  auto quota = bench::quota_from_json(ojson::parse(qin));
  if (o.dry_run) {
    out << "ok: " << raws.size() << " raw cases\n";
    return kExitOk;
  }
  rt.connect();
  bench::BuildConfig bc{rt.cfg.models.evaluated, rt.cfg.models.judge, rt.cfg.models.strong, rt.cfg.perturbation};
  auto cases = bench::build_cases(*rt.gw, raws, bc, corpus, rt.cfg.jobs);
  auto split = bench::assemble_benchmark(cases, quota);
  write_cases(bench_out, split.benchmark);
  write_cases(train_out, split.training);
  out << "labeled " << cases.size() << " cases: " << split.benchmark.size() << " benchmark, "
      << split.training.size() << " training\n";
  return kExitOk;
}

inline int cmd_judge(const Options& o, std::ostream& out) {
  auto rt = runtime(o);
  auto bench = read_cases(input(o.bench, &rt.cfg, "bench"));
  const auto strategy = strategy_from_string(o.strategy);
  const auto out_path = input(o.out, &rt.cfg, "judgments");
  if (o.dry_run) {
    out << "ok: " << bench.size() << " cases\n";
    return kExitOk;
  }
  rt.connect();
  judge::JudgeConfig jc{{rt.cfg.models.evaluated.model, rt.cfg.judging.with_seed(static_cast<std::int64_t>(rt.cfg.seed))},
                        rt.cfg.models.judge,
                        rt.cfg.capability_by_prompt,
                        rt.cfg.n_probes};
  std::vector<Judgment> js(bench.size());
  parallel_for(bench.size(), rt.cfg.jobs, [&](std::size_t i) { js[i] = judge::judge_source(*rt.gw, bench[i], strategy, jc); });
  write_judgments(out_path, js);
  out << "judged " << js.size() << " cases -> " << out_path.string() << "\n";
  return kExitOk;
}

inline int cmd_resolve(const Options& o, std::ostream& out) {
  auto rt = runtime(o);
  auto bench = read_cases(input(o.bench, &rt.cfg, "bench"));
  auto judgments = read_judgments(input(o.judgments, &rt.cfg, "judgments"));
  const auto out_path = input(o.out, &rt.cfg, "transcripts");
  auto corpus = maybe_index(optional_input(o.index, &rt.cfg, "index"));
  std::unordered_map<std::string, const Case*> by_id;
  for (const auto& c : bench) by_id[c.id] = &c;
  for (const auto& j : judgments) {
    if (!by_id.count(j.case_id)) throw NotFoundError("judgment for unknown case '" + j.case_id + "'");
  }
  if (o.dry_run) {
    out << "ok: " << judgments.size() << " judgments\n";
    return kExitOk;
  }
  rt.connect();
  resolve::ResolveConfig rc{rt.cfg.models.evaluated, rt.cfg.models.user_sim, rt.cfg.k};
  std::vector<InteractionTranscript> ts(judgments.size());
  parallel_for(judgments.size(), rt.cfg.jobs, [&](std::size_t i) {
    ts[i] = resolve::resolve(*rt.gw, *by_id.at(judgments[i].case_id), judgments[i], rc, corpus ? &*corpus : nullptr);
  });
  write_transcripts(out_path, ts);
  out << "resolved " << ts.size() << " cases -> " << out_path.string() << "\n";
  return kExitOk;
}

inline int cmd_eval(const Options& o, std::ostream& out) {
  auto rt = runtime(o);
  auto bench = labeled(read_cases(input(o.bench, &rt.cfg, "bench")), "eval");
  if (bench.empty()) throw ParameterError("eval: benchmark is empty");
  const auto strategy = strategy_from_string(o.strategy);
  const auto out_path = input(o.out, &rt.cfg, "report");
  auto corpus = maybe_index(optional_input(o.index, &rt.cfg, "index"));
  auto ec = eval_config(rt.cfg, o.repeats);
  if (o.dry_run) {
    out << "ok: " << bench.size() << " cases, " << ec.repeats << " repeats\n";
    return kExitOk;
  }
  rt.connect();
  auto report = eval::run_eval(*rt.gw, bench, strategy, ec, corpus ? &*corpus : nullptr);
  write_text(out_path, eval::to_json(report).dump(2) + "\n");
  out << std::fixed << std::setprecision(4) << "AQ " << report.average.aq << "  UCA " << report.average.uca
      << "  errors " << report.errors << " -> " << out_path.string() << "\n";
  return kExitOk;
}

inline int cmd_dpo_seed(const Options& o, std::ostream& out) {
  auto rt = runtime(o);
  auto cases = labeled(read_cases(input(o.cases, &rt.cfg, "cases")), "dpo-seed");
  const auto out_path = input(o.out, &rt.cfg, "pairs");
  auto corpus = maybe_index(optional_input(o.index, &rt.cfg, "index"));
  if (rt.cfg.models.generators.size() < 2) throw ParameterError("dpo-seed needs at least two models.generators");
  if (o.dry_run) {
    out << "ok: " << cases.size() << " cases\n";
    return kExitOk;
  }
  rt.connect();
  auto pairs = dpo::collect_seed_pairs(*rt.gw, cases, rt.cfg.models.generators, dpo::label_config(rt.cfg.models, rt.cfg.k),
                                       corpus ? &*corpus : nullptr, rt.cfg.jobs);
  dpo::write_pairs(out_path, pairs);
  out << "wrote " << pairs.size() << " pairs -> " << out_path.string() << "\n";
  return kExitOk;
}

inline int cmd_serve(const Options& o, std::ostream& out) {
  auto rt = runtime(o);
  auto cases = read_cases(input(o.cases, &rt.cfg, "cases"));
  auto corpus = maybe_index(optional_input(o.index, &rt.cfg, "index"));
  if (o.dry_run) {
    out << "ok: " << cases.size() << " cases\n";
    return kExitOk;
  }
  rt.connect();
  dpo::Environment env{rt.gw.get(), dpo::label_config(rt.cfg.models, rt.cfg.k), corpus ? &*corpus : nullptr,
                       std::move(cases)};
  dpo::EnvironmentService svc(std::move(env), o.host, o.port);
  if (!o.port_file.empty()) write_text(o.port_file, std::to_string(svc.port()) + "\n");
  out << "serving on " << o.host << ":" << svc.port() << std::endl;
  svc.wait();
  return kExitOk;
}

inline int cmd_report(const Options& o, std::ostream& out) {
  require_file(o.in);
  std::ifstream in(o.in);
  auto j = ojson::parse(in);
  auto fmt = [](const ojson& v) {
    if (v.is_null()) return std::string("   -  ");
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v.get<double>();
    return s.str();
  };
  out << "strategy " << j.at("strategy").get<std::string>() << ", repeats " << j.at("repeats") << ", errors "
      << j.at("errors") << "\n";
  out << std::left << std::setw(12) << "dataset" << "  AQ      UCA     IQ      wF1     n\n";
  auto line = [&](const std::string& name, const ojson& m) {
    out << std::left << std::setw(12) << name << "  " << fmt(m.at("aq")) << "  " << fmt(m.at("uca")) << "  "
        << fmt(m.at("iq")) << "  " << fmt(m.at("weighted_f1")) << "  " << m.at("n_cases") << "\n";
  };
  for (const auto& [name, m] : j.at("averaged").items()) line(name, m);
  line("average", j.at("average"));
  return kExitOk;
}

}  // namespace detail

// Entry point for the `confuse` tool. Usage errors exit 2, everything else
// that fails exits 1 with a one-line diagnostic on `err`.
inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  detail::Options o;
  CLI::App app{"Uncertainty-source diagnosis, resolution and evaluation for retrieval-augmented LLMs", "confuse"};
  app.require_subcommand(1);

  auto* index = app.add_subcommand("index", "build a BM25 index from a document JSONL file");
  detail::add_common(index, o, false);
  index->add_option("--corpus", o.corpus, "documents JSONL")->required();
  index->add_option("--out", o.out, "index file")->required();

  auto* build = app.add_subcommand("build", "label raw cases and assemble benchmark/training splits");
  detail::add_common(build, o, true);
  build->add_option("--raw", o.raw, "raw cases JSONL");
  build->add_option("--corpus,--index", o.corpus, "index file");
  build->add_option("--quota", o.quota, "quota JSON");
  build->add_option("--out-bench", o.out_bench, "benchmark cases JSONL");
  build->add_option("--out-train", o.out_train, "training cases JSONL");

  auto* judge = app.add_subcommand("judge", "predict the uncertainty source of each case");
  detail::add_common(judge, o, true);
  judge->add_option("--bench", o.bench, "cases JSONL");
  judge->add_option("--strategy", o.strategy, "prompt | inquiry | answer")
      ->check(CLI::IsMember({"prompt", "inquiry", "answer"}));
  judge->add_option("--out", o.out, "judgments JSONL");

  auto* resolve = app.add_subcommand("resolve", "run the remedy for each judgment");
  detail::add_common(resolve, o, true);
  resolve->add_option("--bench", o.bench, "cases JSONL");
  resolve->add_option("--judgments", o.judgments, "judgments JSONL");
  resolve->add_option("--index", o.index, "index file");
  resolve->add_option("--out", o.out, "transcripts JSONL");

  auto* eval = app.add_subcommand("eval", "judge, resolve, answer and score a benchmark");
  detail::add_common(eval, o, true);
  eval->add_option("--bench", o.bench, "cases JSONL");
  eval->add_option("--strategy", o.strategy, "prompt | inquiry | answer")
      ->check(CLI::IsMember({"prompt", "inquiry", "answer"}));
  eval->add_option("--repeats", o.repeats, "repeats (seeds seed, seed+1, ...)")->check(CLI::PositiveNumber);
  eval->add_option("--index", o.index, "index file");
  eval->add_option("--out", o.out, "report JSON");

  auto* seed = app.add_subcommand("dpo-seed", "collect seed preference pairs from generator models");
  detail::add_common(seed, o, true);
  seed->add_option("--cases", o.cases, "training cases JSONL");
  seed->add_option("--index", o.index, "index file");
  seed->add_option("--out", o.out, "pairs JSONL");

  auto* serve = app.add_subcommand("serve-env", "serve the labeling environment over HTTP");
  detail::add_common(serve, o, true);
  serve->add_option("--cases", o.cases, "cases JSONL");
  serve->add_option("--index", o.index, "index file");
  serve->add_option("--host", o.host, "bind address");
  serve->add_option("--port", o.port, "port (0 picks a free one)");
  serve->add_option("--port-file", o.port_file, "write the bound port here");

  auto* report = app.add_subcommand("report", "print a report as a table");
  report->add_option("--in", o.in, "report JSON")->required();

  std::vector<const char*> args;
  args.reserve(argv.size() + 1);
  args.push_back("confuse");
  for (const auto& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "confuse: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (index->parsed()) return detail::cmd_index(o, out);
    if (build->parsed()) return detail::cmd_build(o, out);
    if (judge->parsed()) return detail::cmd_judge(o, out);
    if (resolve->parsed()) return detail::cmd_resolve(o, out);
    if (eval->parsed()) return detail::cmd_eval(o, out);
    if (seed->parsed()) return detail::cmd_dpo_seed(o, out);
    if (serve->parsed()) return detail::cmd_serve(o, out);
    if (report->parsed()) return detail::cmd_report(o, out);
  } catch (const std::exception& e) {
    err << "confuse: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace confuse::cli
