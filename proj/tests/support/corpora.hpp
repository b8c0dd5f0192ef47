#pragma once

#include <random>
#include <string>
#include <vector>

#include "confuse/core/types.hpp"

namespace testing_support {

// Random documents over a small vocabulary so terms repeat across
// documents and queries hit several of them.
inline std::vector<confuse::Document> random_corpus(std::mt19937_64& rng, std::size_t max_docs = 50) {
  static const std::vector<std::string> vocab = {
      "yoga", "city",  "york",  "london", "screen", "writer", "film", "tax",  "law",   "cat",
      "dog",  "river", "value", "spring", "record", "studio", "best", "class", "actor", "item"};
  std::uniform_int_distribution<std::size_t> n_docs(1, max_docs), len(1, 25), word(0, vocab.size() - 1);
  std::vector<confuse::Document> docs;
  const std::size_t n = n_docs(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::string title = vocab[word(rng)];
    std::string body;
    const std::size_t l = len(rng);
    for (std::size_t w = 0; w < l; ++w) body += (w ? " " : "") + vocab[word(rng)];
    docs.push_back({"d" + std::to_string(i), title, body, false});
  }
  return docs;
}

inline std::string random_query(std::mt19937_64& rng) {
  static const std::vector<std::string> vocab = {"yoga", "city", "tax", "river", "film", "quantum", "best",
                                                 "class", "York", "Spring", "cat", "unseen"};
  std::uniform_int_distribution<std::size_t> len(1, 5), word(0, vocab.size() - 1);
  std::string q;
  const std::size_t l = len(rng);
  for (std::size_t w = 0; w < l; ++w) q += (w ? " " : "") + vocab[word(rng)];
  return q;
}

}  // namespace testing_support
