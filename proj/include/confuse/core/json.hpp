#pragma once

// JSON mapping for the core records. Field order follows the case-file
// schema, so ordered_json is used throughout.

#include <nlohmann/json.hpp>

#include "confuse/core/types.hpp"

namespace confuse {

using ojson = nlohmann::ordered_json;

namespace detail {

inline const ojson& require(const ojson& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParameterError(std::string("missing field '") + key + "'");
  return *it;
}

inline std::string require_string(const ojson& j, const char* key) {
  const ojson& v = require(j, key);
  if (!v.is_string()) throw ParameterError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::optional<std::string> optional_string(const ojson& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ParameterError(std::string("field '") + key + "' must be a string or null");
  return it->get<std::string>();
}

}  // namespace detail

inline ojson to_json(const Document& d) {
  return ojson{{"doc_id", d.doc_id}, {"title", d.title}, {"body", d.body}, {"is_gold", d.is_gold}};
}

inline Document document_from_json(const ojson& j) {
  if (!j.is_object()) throw ParameterError("document must be an object");
  Document d;
  d.doc_id = detail::require_string(j, "doc_id");
  d.title = j.contains("title") ? detail::require_string(j, "title") : std::string{};
  d.body = detail::require_string(j, "body");
  if (auto it = j.find("is_gold"); it != j.end()) {
    if (!it->is_boolean()) throw ParameterError("field 'is_gold' must be a boolean");
    d.is_gold = it->get<bool>();
  }
  return d;
}

inline ojson to_json(const std::vector<Document>& docs) {
  ojson arr = ojson::array();
  for (const auto& d : docs) arr.push_back(to_json(d));
  return arr;
}

inline std::vector<Document> documents_from_json(const ojson& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_array()) throw ParameterError(std::string("field '") + key + "' must be an array");
  std::vector<Document> out;
  out.reserve(it->size());
  for (const auto& d : *it) out.push_back(document_from_json(d));
  return out;
}

inline ojson to_json(const Case& c) {
  auto opt = [](const std::optional<std::string>& s) { return s ? ojson(*s) : ojson(nullptr); };
  return ojson{
      {"id", c.id},
      {"dataset", std::string(to_string(c.dataset))},
      {"original_query", c.original_query},
      {"actual_query", c.actual_query},
      {"gold_documents", to_json(c.gold_documents)},
      {"actual_documents", to_json(c.actual_documents)},
      {"clarification", opt(c.clarification)},
      {"gold_answer", c.gold_answer},
      {"gold_inquiry", opt(c.gold_inquiry)},
      {"label", c.label ? ojson(std::string(to_string(*c.label))) : ojson(nullptr)},
      {"split", std::string(to_string(c.split))},
  };
}

inline Case case_from_json(const ojson& j) {
  if (!j.is_object()) throw ParameterError("record must be a JSON object");
  Case c;
  c.id = detail::require_string(j, "id");
  if (c.id.empty()) throw ParameterError("field 'id' must be non-empty");
  c.dataset = dataset_from_string(detail::require_string(j, "dataset"));
  c.original_query = detail::require_string(j, "original_query");
  c.actual_query = detail::require_string(j, "actual_query");
  c.gold_documents = documents_from_json(j, "gold_documents");
  c.actual_documents = documents_from_json(j, "actual_documents");
  c.clarification = detail::optional_string(j, "clarification");
  c.gold_answer = detail::require_string(j, "gold_answer");
  c.gold_inquiry = detail::optional_string(j, "gold_inquiry");
  if (auto label = detail::optional_string(j, "label")) c.label = source_from_string(*label);
  if (auto split = detail::optional_string(j, "split")) c.split = split_from_string(*split);
  return c;
}

inline ojson to_json(const Judgment& jd) {
  ojson samples = ojson::array();
  for (auto s : jd.samples) samples.push_back(std::string(to_string(s)));
  return ojson{
      {"case_id", jd.case_id},
      {"strategy", std::string(to_string(jd.strategy))},
      {"predicted", std::string(to_string(jd.predicted))},
      {"samples", samples},
      {"inquiry", jd.inquiry ? ojson(*jd.inquiry) : ojson(nullptr)},
      {"inquiry_answers", jd.inquiry_answers},
  };
}

inline Judgment judgment_from_json(const ojson& j) {
  if (!j.is_object()) throw ParameterError("judgment must be a JSON object");
  Judgment jd;
  jd.case_id = detail::require_string(j, "case_id");
  jd.strategy = strategy_from_string(detail::require_string(j, "strategy"));
  jd.predicted = source_from_string(detail::require_string(j, "predicted"));
  for (const auto& s : detail::require(j, "samples")) jd.samples.push_back(source_from_string(s.get<std::string>()));
  jd.inquiry = detail::optional_string(j, "inquiry");
  if (auto it = j.find("inquiry_answers"); it != j.end() && it->is_array()) {
    for (const auto& a : *it) jd.inquiry_answers.push_back(a.get<std::string>());
  }
  return jd;
}

inline ojson to_json(const InteractionTranscript& t) {
  ojson turns = ojson::array();
  for (const auto& turn : t.turns) {
    turns.push_back(ojson{{"channel", std::string(to_string(turn.channel))},
                          {"inquiry", turn.inquiry},
                          {"response", turn.response}});
  }
  return ojson{{"case_id", t.case_id}, {"turns", turns}, {"final_answer", t.final_answer}};
}

inline InteractionTranscript transcript_from_json(const ojson& j) {
  if (!j.is_object()) throw ParameterError("transcript must be a JSON object");
  InteractionTranscript t;
  t.case_id = detail::require_string(j, "case_id");
  for (const auto& turn : detail::require(j, "turns")) {
    t.turns.push_back(Turn{channel_from_string(detail::require_string(turn, "channel")),
                           detail::require_string(turn, "inquiry"),
                           detail::require_string(turn, "response")});
  }
  t.final_answer = detail::require_string(j, "final_answer");
  return t;
}

}  // namespace confuse
