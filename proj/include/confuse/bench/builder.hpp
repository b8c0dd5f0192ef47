#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confuse/bench/amr.hpp"
#include "confuse/core/case_io.hpp"
#include "confuse/eval/scoring.hpp"
#include "confuse/resolve/answer.hpp"
#include "confuse/retrieval/perturb.hpp"
#include "confuse/util/parallel.hpp"
#include "confuse/util/random.hpp"

namespace confuse::bench {

// An unlabeled source item. For natively ambiguous sets `query` is the
// disambiguated intent and `ambiguous_query`/`clarification` come with the
// data; otherwise ambiguity is manufactured.
struct RawCase {
  std::string id;
  Dataset dataset = Dataset::Custom;
  std::string query;
  std::vector<Document> gold_documents;
  std::string gold_answer;
  std::optional<std::string> ambiguous_query;
  std::optional<std::string> clarification;
};

inline RawCase raw_case_from_json(const ojson& j) {
  if (!j.is_object()) throw ParameterError("raw case must be a JSON object");
  RawCase r;
  r.id = confuse::detail::require_string(j, "id");
  if (r.id.empty()) throw ParameterError("field 'id' must be non-empty");
  r.dataset = dataset_from_string(confuse::detail::require_string(j, "dataset"));
  r.query = confuse::detail::require_string(j, "query");
  r.gold_documents = documents_from_json(j, "gold_documents");
  for (auto& d : r.gold_documents) d.is_gold = true;
  r.gold_answer = confuse::detail::require_string(j, "gold_answer");
  r.ambiguous_query = confuse::detail::optional_string(j, "ambiguous_query");
  r.clarification = confuse::detail::optional_string(j, "clarification");
  return r;
}

inline std::vector<RawCase> read_raw_cases(const std::filesystem::path& path) {
  return read_jsonl<RawCase>(path, [](const ojson& j) { return raw_case_from_json(j); });
}

struct BuildConfig {
  Role answerer;   // model whose failures define the labels
  Role judge;      // correctness / usefulness grader and obscurity judge
  Role generator;  // AMR, obscuring and gold-inquiry author
  retrieval::PerturbationPolicy policy;
  int obscurity_samples = 3;
  int ambiguation_attempts = 2;
};

namespace detail {

inline Case probe_case(const std::string& id, Dataset ds, const std::string& query, std::vector<Document> docs) {
  Case c;
  c.id = id;
  c.dataset = ds;
  c.original_query = query;
  c.actual_query = query;
  c.actual_documents = std::move(docs);
  return c;
}

inline bool answered_correctly(llm::Gateway& gw, const Case& asked, const std::string& gold_answer,
                               const BuildConfig& cfg, const std::string& purpose) {
  std::string answer = resolve::answer_query(gw, asked, {}, cfg.answerer, false, std::nullopt, purpose);
  Case graded = asked;
  graded.gold_answer = gold_answer;
  return eval::score_answer(gw, graded, answer, cfg.judge) >= success_threshold(asked.dataset);
}

}  // namespace detail

// Capability when the model fails even with the gold documents, Document
// when it only fails after perturbation, otherwise nothing (excluded).
inline std::optional<Case> classify_raw_case(llm::Gateway& gw, const RawCase& raw, const BuildConfig& cfg,
                                             const retrieval::Corpus& corpus) {
  if (text::trim(raw.gold_answer).empty()) throw ParameterError("raw case '" + raw.id + "' has no gold answer");

  Case c;
  c.id = raw.id;
  c.dataset = raw.dataset;
  c.original_query = raw.query;
  c.actual_query = raw.query;
  c.gold_documents = raw.gold_documents;
  c.gold_answer = raw.gold_answer;

  auto with_gold = detail::probe_case(raw.id, raw.dataset, raw.query, raw.gold_documents);
  if (!detail::answered_correctly(gw, with_gold, raw.gold_answer, cfg, "build.answer.gold")) {
    c.actual_documents = raw.gold_documents;
    c.label = UncertaintySource::Capability;
    return c;
  }

  auto policy = cfg.policy;
  policy.seed = cfg.policy.seed ^ stable_hash(raw.id);
  auto perturbed = retrieval::perturb_documents(raw.gold_documents, corpus, raw.query, policy);
  auto with_perturbed = detail::probe_case(raw.id, raw.dataset, raw.query, perturbed.documents);
  if (!detail::answered_correctly(gw, with_perturbed, raw.gold_answer, cfg, "build.answer.perturbed")) {
    c.actual_documents = std::move(perturbed.documents);
    c.label = UncertaintySource::Document;
    return c;
  }
  return std::nullopt;
}

struct AmbiguationResult {
  std::string amr;
  std::string obscured_amr;
  std::string obscured_query;
  std::string clarification;
  std::string thinking;
};

struct GoldInquiry {
  std::string missing_information;
  std::string inquiry;

  // What gets stored in Case::gold_inquiry and shown to the IQ judge.
  std::string slot_text() const {
    return "Missing Detail: " + missing_information + "\nGold Inquiry: " + inquiry;
  }
};

inline GoldInquiry gold_inquiry_for(llm::Gateway& gw, const std::string& original_query,
                                    const std::vector<Document>& gold_docs, const std::string& actual_query,
                                    const std::vector<Document>& actual_docs, const Role& model) {
  auto p = prompts::render(prompts::kGoldInquiry,
                           {original_query, prompts::render_documents(gold_docs), actual_query,
                            prompts::render_documents(actual_docs)});
  auto rec = gw.complete_structured(model.model, {llm::user(std::move(p))}, model.params,
                                    {"missing information", "inquiry"}, "build.gold_inquiry");
  GoldInquiry g{text::trim(llm::value_as_string(rec.at("missing information"))),
                text::trim(llm::value_as_string(rec.at("inquiry")))};
  if (g.inquiry.empty()) throw StructuredOutputError("empty gold inquiry", rec.dump(), {});
  return g;
}

inline GoldInquiry generate_gold_inquiry(llm::Gateway& gw, const Case& c, const Role& model) {
  return gold_inquiry_for(gw, c.original_query, c.gold_documents, c.actual_query, c.actual_documents, model);
}

// Two stages: AMR for the query, then the obscuring prompt over it. The
// clarification is the "missing information" the gold-inquiry prompt finds
// between the two queries.
inline AmbiguationResult ambiguate_query(llm::Gateway& gw, const std::string& query, const Role& model) {
  if (text::trim(query).empty()) throw ParameterError("ambiguate_query: query must be non-empty");

  std::string raw_amr = gw.complete(model.model, {llm::user(prompts::render(prompts::kAmrParse, {query}))},
                                    model.params, "build.amr");
  std::string amr = text::trim(llm::strip_fences(raw_amr));
  try {
    amr::Graph::parse(amr);
  } catch (const ParameterError& e) {
    throw StructuredOutputError(std::string("model did not return a PENMAN graph: ") + e.what(), raw_amr, {});
  }

  auto rec = gw.complete_structured(
      model.model, {llm::user(prompts::render(prompts::kAmbiguateAmr, {query, amr}))}, model.params,
      {"step_by_step_thinking", "Obscured Abstract Meaning Representation (AMR)", "Translated Text Query"},
      "build.obscure");
  AmbiguationResult r;
  r.amr = amr;
  r.thinking = llm::value_as_string(rec.at("step_by_step_thinking"));
  r.obscured_amr = llm::value_as_string(rec.at("Obscured Abstract Meaning Representation (AMR)"));
  r.obscured_query = text::trim(llm::value_as_string(rec.at("Translated Text Query")));
  if (r.obscured_query.empty() || text::normalize(r.obscured_query) == text::normalize(query)) {
    throw DegenerateAmbiguationError("obscured query is identical to the source query");
  }
  r.clarification = gold_inquiry_for(gw, query, {}, r.obscured_query, {}, model).missing_information;
  if (r.clarification.empty()) throw StructuredOutputError("empty clarification", rec.dump(), {});
  return r;
}

struct ObscurityVerdict {
  bool success = false;
  std::string reason;
};

inline std::string clarified_query(const std::string& obscured, const std::string& clarification) {
  return obscured + "\n" + clarification;
}

// Success needs the obscured query to defeat the answerer while the
// clarified one does not; the final call is the judge prompt.
inline ObscurityVerdict validate_obscurity(llm::Gateway& gw, const std::string& original_query,
                                           const std::string& gold_answer, const std::string& obscured_query,
                                           const std::string& clarification, const BuildConfig& cfg,
                                           Dataset dataset = Dataset::Custom,
                                           const std::vector<Document>& documents = {}) {
  if (text::normalize(obscured_query) == text::normalize(original_query)) {
    return {false, "degenerate: obscured query equals the original"};
  }
  for (const auto* s : {&original_query, &gold_answer, &obscured_query, &clarification}) {
    if (text::trim(*s).empty()) throw ParameterError("validate_obscurity: all texts must be non-empty");
  }

  const int n = std::max(1, cfg.obscurity_samples);
  const auto base = cfg.answerer.seed_or(0);
  auto sample = [&](const std::string& q, const char* tag) {
    ojson answers = ojson::array();
    auto asked = detail::probe_case("obscurity", dataset, q, documents);
    for (int i = 0; i < n; ++i) {
      answers.push_back(resolve::answer_query(gw, asked, {}, cfg.answerer.seeded(base + i), false, std::nullopt,
                                              std::string("build.obscurity.") + tag));
    }
    return answers;
  };

  const std::string clarified = clarified_query(obscured_query, clarification);
  ojson on_original = sample(original_query, "original");
  ojson on_obscured = sample(obscured_query, "obscured");
  const std::string gold = text::normalize(gold_answer);
  for (const auto& a : on_obscured) {
    if (text::contains(text::normalize(a.get<std::string>()), gold)) {
      return {false, "obscured query still answerable"};
    }
  }
  ojson on_clarified = sample(clarified, "clarified");

  auto p = prompts::render(prompts::kCheckObscurity,
                           {original_query, on_original.dump(), obscured_query, on_obscured.dump(), clarified,
                            on_clarified.dump()});
  auto rec = gw.complete_structured(cfg.judge.model, {llm::user(std::move(p))}, cfg.judge.params, {"answer"},
                                    "build.obscurity.judge");
  const auto verdict = text::to_lower(llm::value_as_string(rec.at("answer")));
  if (text::contains(verdict, "success") && !text::contains(verdict, "fail")) return {true, {}};
  std::string why = rec.contains("step_by_step_thinking") ? llm::value_as_string(rec["step_by_step_thinking"])
                                                          : verdict;
  return {false, "judged a failure: " + why};
}

inline std::string ambiguity_case_id(const std::string& raw_id) { return raw_id + "#amb"; }

// Natively ambiguous items skip ambiguation but still go through the
// obscurity check. Returns nothing when no valid obscuring was found.
inline std::optional<Case> build_ambiguity_case(llm::Gateway& gw, const RawCase& raw, const BuildConfig& cfg) {
  std::string obscured;
  std::string clarification;
  if (raw.ambiguous_query && raw.clarification) {
    obscured = *raw.ambiguous_query;
    clarification = *raw.clarification;
  } else {
    const auto base = cfg.generator.seed_or(0);
    for (int attempt = 0; attempt < std::max(1, cfg.ambiguation_attempts); ++attempt) {
      try {
        auto r = ambiguate_query(gw, raw.query, cfg.generator.seeded(base + attempt));
        obscured = r.obscured_query;
        clarification = r.clarification;
        break;
      } catch (const DegenerateAmbiguationError&) {
      }
    }
    if (obscured.empty()) return std::nullopt;
  }

  auto verdict = validate_obscurity(gw, raw.query, raw.gold_answer, obscured, clarification, cfg, raw.dataset,
                                    raw.gold_documents);
  if (!verdict.success) return std::nullopt;

  Case c;
  c.id = ambiguity_case_id(raw.id);
  c.dataset = raw.dataset;
  c.original_query = raw.query;
  c.actual_query = obscured;
  c.gold_documents = raw.gold_documents;
  c.actual_documents = raw.gold_documents;
  c.clarification = clarification;
  c.gold_answer = raw.gold_answer;
  c.label = UncertaintySource::Ambiguity;
  return c;
}

// Labels every raw item, adds gold inquiries to Document and Ambiguity
// cases, and keeps input order (classified case first, then its ambiguous
// sibling).
inline std::vector<Case> build_cases(llm::Gateway& gw, const std::vector<RawCase>& raws, const BuildConfig& cfg,
                                     const retrieval::Corpus& corpus, std::size_t jobs = 1) {
  std::vector<std::vector<Case>> per_raw(raws.size());
  parallel_for(raws.size(), jobs, [&](std::size_t i) {
    const auto& raw = raws[i];
    auto& out = per_raw[i];
    auto classified = classify_raw_case(gw, raw, cfg, corpus);
    const bool capable = !classified || classified->label != UncertaintySource::Capability;
    if (classified) out.push_back(std::move(*classified));
    if (capable) {
      if (auto amb = build_ambiguity_case(gw, raw, cfg)) out.push_back(std::move(*amb));
    }
    for (auto& c : out) {
      if (c.label != UncertaintySource::Capability) c.gold_inquiry = generate_gold_inquiry(gw, c, cfg.generator).slot_text();
    }
  });
  std::vector<Case> all;
  for (auto& v : per_raw) {
    for (auto& c : v) all.push_back(std::move(c));
  }
  return all;
}

struct LabelQuota {
  std::size_t document = 0;
  std::size_t ambiguity = 0;
  std::size_t capability = 0;

  std::size_t of(UncertaintySource s) const {
    switch (s) {
      case UncertaintySource::Document: return document;
      case UncertaintySource::Ambiguity: return ambiguity;
      case UncertaintySource::Capability: return capability;
    }
    return 0;
  }
};

struct QuotaSpec {
  std::map<Dataset, LabelQuota> per_dataset;
  std::uint64_t seed = 0;
};

// 50 document, 50 ambiguity and 30 capability cases for each of the five
// source datasets.
inline QuotaSpec standard_quota(std::uint64_t seed = 0) {
  QuotaSpec q;
  q.seed = seed;
  for (Dataset d : {Dataset::HotpotQA, Dataset::AmbigQA, Dataset::TechQA, Dataset::ExpertQA, Dataset::ToolBench}) {
    q.per_dataset[d] = {50, 50, 30};
  }
  return q;
}

inline QuotaSpec quota_from_json(const ojson& j) {
  QuotaSpec q;
  q.seed = j.value("seed", std::uint64_t{0});
  auto count = [](const ojson& o, const char* key) -> std::size_t {
    if (!o.contains(key)) return 0;
    const auto& v = o.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ParameterError(std::string("quota count '") + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
  };
  for (const auto& [name, counts] : confuse::detail::require(j, "per_dataset").items()) {
    q.per_dataset[dataset_from_string(name)] = {count(counts, "document"), count(counts, "ambiguity"),
                                                count(counts, "capability")};
  }
  return q;
}

struct Assembled {
  std::vector<Case> benchmark;
  std::vector<Case> training;
};

// Seeded sampling without replacement per (dataset, label) pool, visited in
// enum order. Both outputs keep input order; unlabeled cases are dropped.
inline Assembled assemble_benchmark(const std::vector<Case>& cases, const QuotaSpec& quota) {
  std::map<std::pair<Dataset, UncertaintySource>, std::vector<std::size_t>> pools;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (cases[i].label) pools[{cases[i].dataset, *cases[i].label}].push_back(i);
  }

  Rng rng(quota.seed);
  std::vector<bool> selected(cases.size(), false);
  for (const auto& [ds, q] : quota.per_dataset) {
    for (UncertaintySource s : kAllSources) {
      const std::size_t want = q.of(s);
      if (want == 0) continue;
      auto it = pools.find({ds, s});
      const std::size_t have = it == pools.end() ? 0 : it->second.size();
      if (have < want) {
        throw ShortfallError(std::string(to_string(ds)) + "/" + std::string(to_string(s)) + ": quota " +
                             std::to_string(want) + " but only " + std::to_string(have) + " cases");
      }
      for (std::size_t k : sample_indices(rng, have, want)) selected[it->second[k]] = true;
    }
  }

  Assembled out;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!cases[i].label) continue;
    Case c = cases[i];
    c.split = selected[i] ? Split::Benchmark : Split::Training;
    (selected[i] ? out.benchmark : out.training).push_back(std::move(c));
  }
  return out;
}

}  // namespace confuse::bench
