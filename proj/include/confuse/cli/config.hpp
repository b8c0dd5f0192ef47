#pragma once

// Run configuration (JSON). Relative paths are resolved against the
// directory of the config file.
//
// {
//   "seed": 0, "jobs": 4, "max_in_flight": 4,
//   "backend": {"kind": "scripted", "script": "script.json"}
//            | {"kind": "live"}
//            | {"kind": "replay", "cache_dir": "cache", "inner": {...}},
//   "models": {"evaluated": {"name": ..., "endpoint": ..., "api_key_env": ...,
//                            "temperature": 0, "max_tokens": 512},
//              "strong": ..., "judge": ..., "user_sim": ..., "generators": [...]},
//   "sampling": {"judging": {"temperature": 0.7, "max_tokens": 512}},
//   "retrieval": {"k": 5, "bm25_k1": 1.2, "bm25_b": 0.75},
//   "perturbation": {"drop_probability": 0.5, "target_size": 5, "seed": 0},
//   "strategy": {"capability_by_prompt": true, "n_probes": 2, "repeats": 3},
//   "paths": {"bench": ..., "index": ..., ...}
// }

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "confuse/core/json.hpp"
#include "confuse/llm/live_backend.hpp"
#include "confuse/retrieval/perturb.hpp"
#include "confuse/roles.hpp"

namespace confuse::cli {

struct BackendSpec {
  std::string kind = "scripted";
  std::filesystem::path script;
  std::filesystem::path cache_dir;
  std::shared_ptr<BackendSpec> inner;
};

struct RunConfig {
  std::filesystem::path base_dir = ".";
  std::uint64_t seed = 0;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  int max_in_flight = 4;
  BackendSpec backend;
  ModelSet models;
  llm::SamplingParams judging = judging_params();
  std::size_t k = 5;
  retrieval::Bm25Params bm25;
  retrieval::PerturbationPolicy perturbation;
  bool capability_by_prompt = true;
  int n_probes = 2;
  int repeats = 3;
  std::map<std::string, std::filesystem::path> paths;

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.empty() || p.is_absolute() ? p : base_dir / p;
  }

  std::optional<std::filesystem::path> path(const std::string& key) const {
    auto it = paths.find(key);
    if (it == paths.end()) return std::nullopt;
    return it->second;
  }
};

namespace detail {

inline llm::SamplingParams sampling_from_json(const ojson& j, llm::SamplingParams p) {
  if (j.contains("temperature")) p.temperature = j.at("temperature").get<double>();
  if (j.contains("max_tokens")) p.max_tokens = j.at("max_tokens").get<int>();
  if (j.contains("seed") && !j.at("seed").is_null()) p.seed = j.at("seed").get<std::int64_t>();
  p.validate();
  return p;
}

inline Role role_from_json(const ojson& j, const char* what) {
  if (!j.is_object()) throw ParameterError(std::string("model '") + what + "' must be an object");
  Role r;
  r.model.name = j.value("name", std::string{});
  r.model.endpoint = j.value("endpoint", r.model.endpoint);
  r.model.api_key_env = j.value("api_key_env", std::string{});
  r.model.validate();
  r.params = sampling_from_json(j, answering_params());
  return r;
}

inline BackendSpec backend_from_json(const ojson& j, const std::filesystem::path& base) {
  BackendSpec b;
  b.kind = j.value("kind", std::string("scripted"));
  auto rel = [&](const std::string& key) -> std::filesystem::path {
    if (!j.contains(key)) return {};
    std::filesystem::path p = j.at(key).get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  if (b.kind == "scripted") {
    b.script = rel("script");
    if (b.script.empty()) throw ParameterError("scripted backend needs \"script\"");
  } else if (b.kind == "replay") {
    b.cache_dir = rel("cache_dir");
    if (b.cache_dir.empty()) throw ParameterError("replay backend needs \"cache_dir\"");
    if (j.contains("inner")) b.inner = std::make_shared<BackendSpec>(backend_from_json(j.at("inner"), base));
  } else if (b.kind != "live") {
    throw ParameterError("unknown backend kind '" + b.kind + "'");
  }
  return b;
}

}  // namespace detail

inline RunConfig config_from_json(const ojson& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  RunConfig c;
  c.base_dir = base_dir;
  c.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("jobs")) c.jobs = std::max<std::size_t>(1, j.at("jobs").get<std::size_t>());
  c.max_in_flight = j.value("max_in_flight", 4);
  if (j.contains("backend")) c.backend = detail::backend_from_json(j.at("backend"), base_dir);

  const ojson& models = confuse::detail::require(j, "models");
  if (!models.contains("evaluated")) throw ParameterError("models.evaluated is required");
  c.models.evaluated = detail::role_from_json(models.at("evaluated"), "evaluated");
  // Missing roles fall back to the evaluated model.
  auto role = [&](const char* name) {
    return models.contains(name) ? detail::role_from_json(models.at(name), name) : c.models.evaluated;
  };
  c.models.strong = role("strong");
  c.models.judge = role("judge");
  c.models.user_sim = role("user_sim");
  if (models.contains("generators")) {
    for (const auto& g : models.at("generators")) c.models.generators.push_back(detail::role_from_json(g, "generator"));
  }

  if (j.contains("sampling") && j.at("sampling").contains("judging")) {
    c.judging = detail::sampling_from_json(j.at("sampling").at("judging"), c.judging);
  }
  if (j.contains("retrieval")) {
    const auto& r = j.at("retrieval");
    c.k = r.value("k", c.k);
    c.bm25.k1 = r.value("bm25_k1", c.bm25.k1);
    c.bm25.b = r.value("bm25_b", c.bm25.b);
    if (c.k == 0) throw ParameterError("retrieval.k must be positive");
  }
  c.perturbation.seed = c.seed;
  if (j.contains("perturbation")) {
    const auto& p = j.at("perturbation");
    c.perturbation.drop_probability = p.value("drop_probability", c.perturbation.drop_probability);
    c.perturbation.target_size = p.value("target_size", c.perturbation.target_size);
    c.perturbation.seed = p.value("seed", c.perturbation.seed);
  }
  c.perturbation.validate();
  if (j.contains("strategy")) {
    const auto& s = j.at("strategy");
    c.capability_by_prompt = s.value("capability_by_prompt", c.capability_by_prompt);
    c.n_probes = s.value("n_probes", c.n_probes);
    c.repeats = s.value("repeats", c.repeats);
    if (c.n_probes < 1) throw ParameterError("strategy.n_probes must be positive");
    if (c.repeats < 1) throw ParameterError("strategy.repeats must be positive");
  }
  if (j.contains("paths")) {
    for (const auto& [k, v] : j.at("paths").items()) c.paths[k] = c.resolve(v.get<std::string>());
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const ojson::exception& e) {
    throw Error("malformed config " + path.string() + ": " + e.what());
  }
  try {
    return config_from_json(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("config " + path.string() + ": " + e.what());
  } catch (const ParameterError& e) {
    throw ParameterError("config " + path.string() + ": " + e.what());
  }
}

inline std::shared_ptr<llm::Backend> make_backend(const BackendSpec& spec) {
  if (spec.kind == "live") return std::make_shared<llm::LiveBackend>();
  if (spec.kind == "replay") {
    return std::make_shared<llm::ReplayBackend>(spec.cache_dir, spec.inner ? make_backend(*spec.inner) : nullptr);
  }
  return llm::ScriptedBackend::from_file(spec.script);
}

}  // namespace confuse::cli
