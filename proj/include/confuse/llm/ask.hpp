#pragma once

#include <optional>
#include <string>
#include <vector>

#include "confuse/llm/gateway.hpp"
#include "confuse/llm/parse.hpp"

namespace confuse::llm {

// Structured call whose `key` must pass `accept`. A value that parses but
// is out of range gets one corrective re-ask; a second bad value raises
// InvalidJudgmentError.
template <typename T, typename Accept>
T ask_value(Gateway& gw, const ModelRef& model, const SamplingParams& params, std::string prompt,
            const std::string& key, Accept accept, const std::string& correction,
            const std::string& purpose) {
  std::vector<Message> messages{user(std::move(prompt))};
  Record rec = gw.complete_structured(model, messages, params, {key}, purpose);
  if (std::optional<T> v = accept(rec.at(key))) return *v;

  messages.push_back(assistant(rec.dump()));
  messages.push_back(user(correction));
  Record again = gw.complete_structured(model, messages, params, {key}, purpose + ".reask");
  if (std::optional<T> v = accept(again.at(key))) return *v;
  throw InvalidJudgmentError("invalid \"" + key + "\" value twice: " + rec.at(key).dump() + ", " +
                             again.at(key).dump());
}

}  // namespace confuse::llm
