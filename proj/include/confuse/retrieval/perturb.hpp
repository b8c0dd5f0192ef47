#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "confuse/retrieval/bm25.hpp"
#include "confuse/util/random.hpp"

namespace confuse::retrieval {

struct PerturbationPolicy {
  double drop_probability = 0.5;
  std::size_t target_size = 5;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(drop_probability > 0.0 && drop_probability <= 1.0)) {
      throw ParameterError("drop_probability must be in (0, 1]");
    }
    if (target_size < 1) throw ParameterError("target_size must be >= 1");
  }
};

struct Perturbed {
  std::vector<Document> documents;
  std::vector<std::string> dropped;  // doc_ids of the removed gold documents
  bool underfilled = false;
};

// Drops gold documents at random (at least one), then backfills with the
// best BM25 hits for the query that are neither kept nor dropped gold.
inline Perturbed perturb_documents(const std::vector<Document>& gold, const Corpus& corpus,
                                   std::string_view query, const PerturbationPolicy& policy) {
  if (gold.empty()) throw ParameterError("perturb_documents needs at least one gold document");
  policy.validate();

  Rng rng(policy.seed);
  std::vector<bool> drop(gold.size());
  bool any = false;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    drop[i] = bernoulli(rng, policy.drop_probability);
    any = any || drop[i];
  }
  if (!any) drop[uniform_below(rng, gold.size())] = true;

  Perturbed out;
  std::unordered_set<std::string> taken;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    taken.insert(gold[i].doc_id);
    if (drop[i]) {
      out.dropped.push_back(gold[i].doc_id);
    } else if (out.documents.size() < policy.target_size) {
      out.documents.push_back(gold[i]);
    }
  }

  if (out.documents.size() < policy.target_size && !corpus.empty()) {
    for (auto& hit : search(corpus, query, corpus.size())) {
      if (out.documents.size() >= policy.target_size) break;
      if (!taken.insert(hit.document.doc_id).second) continue;
      hit.document.is_gold = false;
      out.documents.push_back(std::move(hit.document));
    }
  }
  out.underfilled = out.documents.size() < policy.target_size;
  return out;
}

}  // namespace confuse::retrieval
