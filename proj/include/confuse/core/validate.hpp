#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "confuse/core/types.hpp"

namespace confuse {

// Checks the per-label invariants of a case. Never throws; an empty result
// means the case is well formed.
inline std::vector<std::string> validate_case(const Case& c) {
  std::vector<std::string> violations;
  if (c.id.empty()) violations.emplace_back("id must be non-empty");

  auto check_bodies = [&](const std::vector<Document>& docs, const char* field) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (docs[i].body.empty()) {
        violations.push_back(std::string(field) + "[" + std::to_string(i) + "].body must be non-empty");
      }
    }
  };
  check_bodies(c.gold_documents, "gold_documents");
  check_bodies(c.actual_documents, "actual_documents");

  if (!c.label) return violations;
  switch (*c.label) {
    case UncertaintySource::Ambiguity:
      if (!c.clarification || c.clarification->empty()) {
        violations.emplace_back("Ambiguity requires clarification");
      }
      if (c.original_query == c.actual_query) {
        violations.emplace_back("Ambiguity requires original_query != actual_query");
      }
      break;
    case UncertaintySource::Document: {
      const bool gold_missing = std::any_of(
          c.gold_documents.begin(), c.gold_documents.end(), [&](const Document& g) {
            return std::none_of(c.actual_documents.begin(), c.actual_documents.end(),
                                [&](const Document& a) { return a.doc_id == g.doc_id; });
          });
      if (!gold_missing) {
        violations.emplace_back("Document requires at least one gold document missing from actual_documents");
      }
      break;
    }
    case UncertaintySource::Capability:
      if (c.actual_query != c.original_query) {
        violations.emplace_back("Capability requires actual_query = original_query");
      }
      if (c.actual_documents != c.gold_documents) {
        violations.emplace_back("Capability requires actual_documents = gold_documents");
      }
      break;
  }
  return violations;
}

}  // namespace confuse
