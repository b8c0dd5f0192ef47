#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confuse/error.hpp"

namespace confuse {

// Why a model cannot answer. The enumerator order is the serialization
// order and must not change.
enum class UncertaintySource { Document = 0, Ambiguity = 1, Capability = 2 };

inline constexpr std::array<UncertaintySource, 3> kAllSources = {
    UncertaintySource::Document, UncertaintySource::Ambiguity,
    UncertaintySource::Capability};

inline std::string_view to_string(UncertaintySource s) {
  switch (s) {
    case UncertaintySource::Document: return "document";
    case UncertaintySource::Ambiguity: return "ambiguity";
    case UncertaintySource::Capability: return "capability";
  }
  return "document";
}

inline UncertaintySource source_from_string(std::string_view s) {
  if (s == "document") return UncertaintySource::Document;
  if (s == "ambiguity") return UncertaintySource::Ambiguity;
  if (s == "capability") return UncertaintySource::Capability;
  throw ParameterError("unknown uncertainty label '" + std::string(s) + "'");
}

// Action letters of the judging prompts: A = retrieval, B = user, C = CoT.
inline char to_letter(UncertaintySource s) {
  return static_cast<char>('A' + static_cast<int>(s));
}

inline std::optional<UncertaintySource> source_from_letter(char c) {
  switch (c) {
    case 'A': return UncertaintySource::Document;
    case 'B': return UncertaintySource::Ambiguity;
    case 'C': return UncertaintySource::Capability;
    default: return std::nullopt;
  }
}

enum class Dataset { HotpotQA, AmbigQA, TechQA, ExpertQA, ToolBench, Custom };

inline constexpr std::array<Dataset, 6> kAllDatasets = {
    Dataset::HotpotQA, Dataset::AmbigQA,   Dataset::TechQA,
    Dataset::ExpertQA, Dataset::ToolBench, Dataset::Custom};

inline std::string_view to_string(Dataset d) {
  switch (d) {
    case Dataset::HotpotQA: return "HotpotQA";
    case Dataset::AmbigQA: return "AmbigQA";
    case Dataset::TechQA: return "TechQA";
    case Dataset::ExpertQA: return "ExpertQA";
    case Dataset::ToolBench: return "ToolBench";
    case Dataset::Custom: return "Custom";
  }
  return "Custom";
}

// Unknown names land in Custom so users can bring their own corpora.
inline Dataset dataset_from_string(std::string_view s) {
  for (Dataset d : kAllDatasets) {
    if (to_string(d) == s) return d;
  }
  return Dataset::Custom;
}

// Short-answer QA sets are judged for binary correctness and answered
// within 50 tokens; everything else is graded for usefulness.
inline bool is_qa(Dataset d) {
  return d == Dataset::HotpotQA || d == Dataset::AmbigQA;
}

inline int answer_token_budget(Dataset d) { return is_qa(d) ? 50 : 500; }

// Minimum normalized answer score that counts as "solved".
inline double success_threshold(Dataset d) {
  return is_qa(d) ? 1.0 : 2.0 / 3.0;
}

enum class Split { Benchmark, Training };

inline std::string_view to_string(Split s) {
  return s == Split::Benchmark ? "benchmark" : "training";
}

inline Split split_from_string(std::string_view s) {
  if (s == "benchmark" || s == "Benchmark") return Split::Benchmark;
  if (s == "training" || s == "Training") return Split::Training;
  throw ParameterError("unknown split '" + std::string(s) + "'");
}

struct Document {
  std::string doc_id;
  std::string title;
  std::string body;
  bool is_gold = false;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Case {
  std::string id;
  Dataset dataset = Dataset::Custom;
  std::string original_query;
  std::string actual_query;
  std::vector<Document> gold_documents;
  std::vector<Document> actual_documents;
  std::optional<std::string> clarification;
  std::string gold_answer;
  std::optional<std::string> gold_inquiry;
  std::optional<UncertaintySource> label;
  Split split = Split::Benchmark;

  friend bool operator==(const Case&, const Case&) = default;
};

enum class Strategy { Prompt, Inquiry, Answer };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Prompt: return "prompt";
    case Strategy::Inquiry: return "inquiry";
    case Strategy::Answer: return "answer";
  }
  return "prompt";
}

inline Strategy strategy_from_string(std::string_view s) {
  if (s == "prompt") return Strategy::Prompt;
  if (s == "inquiry") return Strategy::Inquiry;
  if (s == "answer") return Strategy::Answer;
  throw ParameterError("unknown strategy '" + std::string(s) + "'");
}

struct Judgment {
  std::string case_id;
  Strategy strategy = Strategy::Prompt;
  UncertaintySource predicted = UncertaintySource::Document;
  std::vector<UncertaintySource> samples;
  std::optional<std::string> inquiry;
  std::vector<std::string> inquiry_answers;

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

enum class Channel { Retrieval, User, None };

inline std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::Retrieval: return "retrieval";
    case Channel::User: return "user";
    case Channel::None: return "none";
  }
  return "none";
}

inline Channel channel_from_string(std::string_view s) {
  if (s == "retrieval") return Channel::Retrieval;
  if (s == "user") return Channel::User;
  if (s == "none") return Channel::None;
  throw ParameterError("unknown channel '" + std::string(s) + "'");
}

inline Channel channel_for(UncertaintySource s) {
  switch (s) {
    case UncertaintySource::Document: return Channel::Retrieval;
    case UncertaintySource::Ambiguity: return Channel::User;
    case UncertaintySource::Capability: return Channel::None;
  }
  return Channel::None;
}

struct Turn {
  Channel channel = Channel::None;
  std::string inquiry;
  std::string response;

  friend bool operator==(const Turn&, const Turn&) = default;
};

// Single-round protocol: at most one turn.
struct InteractionTranscript {
  std::string case_id;
  std::vector<Turn> turns;
  std::string final_answer;

  Channel channel() const {
    return turns.empty() ? Channel::None : turns.front().channel;
  }

  friend bool operator==(const InteractionTranscript&,
                         const InteractionTranscript&) = default;
};

}  // namespace confuse
