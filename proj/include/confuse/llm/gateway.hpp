#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <thread>
#include <vector>

#include "confuse/llm/backend.hpp"
#include "confuse/llm/json_extract.hpp"

namespace confuse::llm {

struct RetryPolicy {
  int attempts = 3;
  std::vector<std::chrono::milliseconds> backoff = {std::chrono::milliseconds(1000),
                                                    std::chrono::milliseconds(2000),
                                                    std::chrono::milliseconds(4000)};
};

struct CallRecord {
  std::string fingerprint;
  std::string model;
  std::string purpose;
};

using Record = nlohmann::ordered_json;

inline constexpr const char* kJsonReask =
    "Your previous reply was not valid JSON. Respond with valid JSON only.";

// Uniform chat-completion access. Safe for concurrent use; each ModelRef
// gets its own in-flight limit.
class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit Gateway(std::shared_ptr<Backend> backend, RetryPolicy retry = {}, int max_in_flight = 4)
      : backend_(std::move(backend)), retry_(std::move(retry)), max_in_flight_(max_in_flight) {
    if (!backend_) throw ParameterError("gateway needs a backend");
    if (max_in_flight_ < 1) throw ParameterError("max_in_flight must be >= 1");
  }

  void set_sleeper(Sleeper s) { sleeper_ = std::move(s); }

  std::string complete(const ModelRef& model, std::vector<Message> messages,
                       const SamplingParams& params, std::string purpose = {}) {
    if (messages.empty()) throw ParameterError("messages must be non-empty");
    if (messages.back().role != "user") throw ParameterError("last message role must be 'user'");
    model.validate();
    params.validate();

    Request req{model, std::move(messages), params, std::move(purpose)};
    const std::string fp = fingerprint(req);
    {
      std::lock_guard lock(log_mu_);
      log_.push_back({fp, model.name, req.purpose});
    }

    auto& sem = limiter(model.name);
    sem.acquire();
    struct Release {
      std::counting_semaphore<1024>& s;
      ~Release() { s.release(); }
    } release{sem};

    const int attempts = backend_->retryable() ? std::max(1, retry_.attempts) : 1;
    for (int attempt = 1;; ++attempt) {
      try {
        std::string text = backend_->generate(req, fp);
        if (text::trim(text).empty()) throw TransportError("empty response for " + fp);
        return text;
      } catch (const TransportError& e) {
        if (!e.transient() || attempt >= attempts) {
          throw TransportError("retries exhausted after " + std::to_string(attempt) +
                                   " attempt(s): " + e.what(),
                               e.status());
        }
        const auto& b = retry_.backoff;
        auto delay = b.empty() ? std::chrono::milliseconds(0)
                               : b[std::min<std::size_t>(attempt - 1, b.size() - 1)];
        sleeper_(delay);
      }
    }
  }

  // Extracts the first JSON object from the reply. One re-ask on a parse
  // failure; missing keys are reported without a re-ask.
  Record complete_structured(const ModelRef& model, std::vector<Message> messages,
                             const SamplingParams& params,
                             const std::vector<std::string>& required_keys,
                             const std::string& purpose = {}) {
    if (required_keys.empty()) throw ParameterError("required_keys must be non-empty");
    std::string first = complete(model, messages, params, purpose);
    auto parsed = extract_json_object(first);
    std::string second;
    if (!parsed) {
      messages.push_back(assistant(first));
      messages.push_back(user(kJsonReask));
      second = complete(model, std::move(messages), params, purpose + ".reask");
      parsed = extract_json_object(second);
      if (!parsed) {
        throw StructuredOutputError("no JSON object in two consecutive responses", first, second);
      }
    }
    for (const auto& key : required_keys) {
      if (!parsed->contains(key)) throw KeyMissingError(key);
    }
    return *parsed;
  }

  std::vector<CallRecord> call_log() const {
    std::lock_guard lock(log_mu_);
    return log_;
  }
  void clear_call_log() {
    std::lock_guard lock(log_mu_);
    log_.clear();
  }
  std::size_t count_calls(const std::string& purpose_prefix) const {
    std::lock_guard lock(log_mu_);
    std::size_t n = 0;
    for (const auto& r : log_) n += r.purpose.rfind(purpose_prefix, 0) == 0;
    return n;
  }

  Backend& backend() { return *backend_; }

 private:
  std::counting_semaphore<1024>& limiter(const std::string& model) {
    std::lock_guard lock(limit_mu_);
    auto& slot = limiters_[model];
    if (!slot) slot = std::make_unique<std::counting_semaphore<1024>>(max_in_flight_);
    return *slot;
  }

  std::shared_ptr<Backend> backend_;
  RetryPolicy retry_;
  int max_in_flight_;
  Sleeper sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };

  mutable std::mutex log_mu_;
  std::vector<CallRecord> log_;

  std::mutex limit_mu_;
  std::map<std::string, std::unique_ptr<std::counting_semaphore<1024>>> limiters_;
};

}  // namespace confuse::llm
