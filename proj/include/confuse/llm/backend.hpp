#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "confuse/error.hpp"
#include "confuse/llm/fingerprint.hpp"
#include "confuse/util/text.hpp"

namespace confuse::llm {

enum class BackendKind { Live, Scripted, Replay };

class Backend {
 public:
  virtual ~Backend() = default;

  // Returns raw assistant text for the request. May throw TransportError.
  virtual std::string generate(const Request& request, const std::string& fingerprint) = 0;

  virtual BackendKind kind() const = 0;

  // Whether transport failures from this backend are worth retrying.
  virtual bool retryable() const { return false; }
};

// All message contents joined by newlines; what scripted rules match on.
inline std::string conversation_text(const Request& r) {
  std::string out;
  for (const auto& m : r.messages) {
    if (!out.empty()) out.push_back('\n');
    out += m.content;
  }
  return out;
}

// Pure substring rule: matches when every `all` needle occurs, no `none`
// needle occurs, and (if set) the model name and seed are equal.
struct ScriptRule {
  std::vector<std::string> all;
  std::vector<std::string> none;
  std::optional<std::string> model;
  std::optional<std::int64_t> seed;
  std::string respond;

  bool matches(const Request& r, const std::string& text) const {
    if (model && r.model.name != *model) return false;
    if (seed && r.params.seed != seed) return false;
    for (const auto& n : all) {
      if (!text::contains(text, n)) return false;
    }
    for (const auto& n : none) {
      if (text::contains(text, n)) return false;
    }
    return true;
  }
};

// Deterministic test backend. Lookup order: exact fingerprint table, then
// programmatic responders, then substring rules. Anything else is an
// unscripted request.
class ScriptedBackend : public Backend {
 public:
  using Responder = std::function<std::optional<std::string>(const Request&)>;

  ScriptedBackend() = default;
  explicit ScriptedBackend(std::map<std::string, std::string> table) : table_(std::move(table)) {}

  void set(const std::string& fingerprint, std::string response) {
    std::lock_guard lock(mu_);
    table_[fingerprint] = std::move(response);
  }
  void add_responder(Responder r) {
    std::lock_guard lock(mu_);
    responders_.push_back(std::move(r));
  }
  void add_rule(ScriptRule rule) {
    std::lock_guard lock(mu_);
    rules_.push_back(std::move(rule));
  }

  std::string generate(const Request& request, const std::string& fp) override {
    std::lock_guard lock(mu_);
    if (auto it = table_.find(fp); it != table_.end()) return it->second;
    for (auto& r : responders_) {
      if (auto out = r(request)) return *out;
    }
    if (!rules_.empty()) {
      const std::string text = conversation_text(request);
      for (const auto& rule : rules_) {
        if (rule.matches(request, text)) return rule.respond;
      }
    }
    throw UnscriptedRequestError(fp);
  }

  BackendKind kind() const override { return BackendKind::Scripted; }

  // Script file: {"responses": {fingerprint: text}, "rules": [{"all": [...],
  // "none": [...], "model": name, "seed": n, "respond": text}]}.
  static std::shared_ptr<ScriptedBackend> from_json(const nlohmann::json& j) {
    auto backend = std::make_shared<ScriptedBackend>();
    if (auto it = j.find("responses"); it != j.end()) {
      for (const auto& [fp, text] : it->items()) backend->table_[fp] = text.get<std::string>();
    }
    if (auto it = j.find("rules"); it != j.end()) {
      for (const auto& r : *it) {
        ScriptRule rule;
        rule.all = r.value("all", std::vector<std::string>{});
        rule.none = r.value("none", std::vector<std::string>{});
        if (r.contains("model")) rule.model = r.at("model").get<std::string>();
        if (r.contains("seed")) rule.seed = r.at("seed").get<std::int64_t>();
        rule.respond = r.at("respond").get<std::string>();
        backend->rules_.push_back(std::move(rule));
      }
    }
    return backend;
  }

  static std::shared_ptr<ScriptedBackend> from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open script " + path.string());
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw Error("malformed script " + path.string() + ": " + e.what());
    }
  }

 private:
  std::mutex mu_;
  std::map<std::string, std::string> table_;
  std::vector<Responder> responders_;
  std::vector<ScriptRule> rules_;
};

// Content-addressed response cache in front of another backend. One file
// per fingerprint; concurrent readers, serialized writers. With no inner
// backend a miss is an error, which makes offline replays strict.
class ReplayBackend : public Backend {
 public:
  ReplayBackend(std::filesystem::path dir, std::shared_ptr<Backend> inner)
      : dir_(std::move(dir)), inner_(std::move(inner)) {
    std::filesystem::create_directories(dir_);
  }

  std::string generate(const Request& request, const std::string& fp) override {
    const auto path = dir_ / (fp + ".json");
    {
      std::shared_lock lock(mu_);
      if (auto hit = load(path)) {
        ++hits_;
        return *hit;
      }
    }
    if (!inner_) throw UnscriptedRequestError(fp);
    std::string text = inner_->generate(request, fp);
    std::unique_lock lock(mu_);
    if (auto hit = load(path)) return *hit;  // another writer got there first
    store(path, fp, request.model.name, text);
    return text;
  }

  BackendKind kind() const override { return BackendKind::Replay; }
  bool retryable() const override { return inner_ && inner_->retryable(); }

  std::size_t hits() const { return hits_; }
  const std::filesystem::path& directory() const { return dir_; }

 private:
  static std::optional<std::string> load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("response")) return std::nullopt;
    return j["response"].get<std::string>();
  }

  static void store(const std::filesystem::path& path, const std::string& fp,
                    const std::string& model, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << nlohmann::json{{"fingerprint", fp}, {"model", model}, {"response", text}}.dump(2);
    }
    std::filesystem::rename(tmp, path);
  }

  std::filesystem::path dir_;
  std::shared_ptr<Backend> inner_;
  std::shared_mutex mu_;
  std::atomic<std::size_t> hits_{0};
};

}  // namespace confuse::llm
