#pragma once

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/unordered_map.hpp>
#include <cereal/types/utility.hpp>
#include <cereal/types/vector.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "confuse/core/types.hpp"
#include "confuse/util/text.hpp"

namespace confuse {

template <class Archive>
void serialize(Archive& ar, Document& d) {
  ar(d.doc_id, d.title, d.body, d.is_gold);
}

namespace retrieval {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct Posting {
  std::uint32_t doc = 0;  // ordinal into Corpus::documents
  std::uint32_t tf = 0;

  friend bool operator==(const Posting&, const Posting&) = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(doc, tf);
  }
};

// Text that gets indexed for a document: title and body.
inline std::vector<std::string> document_tokens(const Document& d) {
  auto toks = text::tokenize(d.title);
  auto body = text::tokenize(d.body);
  toks.insert(toks.end(), std::make_move_iterator(body.begin()), std::make_move_iterator(body.end()));
  return toks;
}

// Immutable after ingest; searches may run concurrently.
class Corpus {
 public:
  Corpus() = default;

  static Corpus ingest(std::vector<Document> documents, Bm25Params params = {}) {
    Corpus c;
    c.params_ = params;
    std::unordered_set<std::string> seen;
    for (const auto& d : documents) {
      if (!seen.insert(d.doc_id).second) throw DuplicateIdError(d.doc_id);
      if (d.body.empty()) throw ParameterError("document '" + d.doc_id + "' has an empty body");
    }
    c.documents_ = std::move(documents);
    c.doc_lengths_.reserve(c.documents_.size());
    double total = 0;
    for (std::uint32_t i = 0; i < c.documents_.size(); ++i) {
      auto toks = document_tokens(c.documents_[i]);
      if (toks.empty()) {
        throw ParameterError("document '" + c.documents_[i].doc_id + "' has no indexable tokens");
      }
      std::unordered_map<std::string, std::uint32_t> tf;
      for (auto& t : toks) ++tf[t];
      for (auto& [term, n] : tf) c.postings_[term].push_back({i, n});
      c.doc_lengths_.push_back(static_cast<std::uint32_t>(toks.size()));
      total += static_cast<double>(toks.size());
    }
    c.avg_doc_length_ = c.documents_.empty() ? 0.0 : total / static_cast<double>(c.documents_.size());
    return c;
  }

  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<std::uint32_t>& doc_lengths() const { return doc_lengths_; }
  double avg_doc_length() const { return avg_doc_length_; }
  const Bm25Params& params() const { return params_; }

  std::span<const Posting> postings(const std::string& term) const {
    auto it = postings_.find(term);
    if (it == postings_.end()) return {};
    return it->second;
  }
  std::size_t vocabulary_size() const { return postings_.size(); }

  double idf(std::size_t n) const {
    const double N = static_cast<double>(documents_.size());
    const double df = static_cast<double>(n);
    return std::log((N - df + 0.5) / (df + 0.5) + 1.0);
  }

  const Document* find(const std::string& doc_id) const {
    for (const auto& d : documents_) {
      if (d.doc_id == doc_id) return &d;
    }
    return nullptr;
  }

  template <class Archive>
  void serialize(Archive& ar) {
    ar(params_.k1, params_.b, documents_, postings_, doc_lengths_, avg_doc_length_);
  }

 private:
  Bm25Params params_;
  std::vector<Document> documents_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::vector<std::uint32_t> doc_lengths_;
  double avg_doc_length_ = 0.0;
};

struct Hit {
  Document document;
  double score = 0.0;
};

// Ranked BM25 search. Each distinct query term contributes once. Documents
// that share no term with the query are never returned.
inline std::vector<Hit> search(const Corpus& corpus, std::string_view query, std::size_t k) {
  if (k == 0) throw ParameterError("k must be positive");
  if (corpus.empty()) throw ParameterError("cannot search an empty corpus");

  auto terms = text::tokenize(query);
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

  const auto& p = corpus.params();
  const double avgdl = corpus.avg_doc_length();
  std::unordered_map<std::uint32_t, double> acc;
  for (const auto& t : terms) {
    auto plist = corpus.postings(t);
    if (plist.empty()) continue;
    const double idf = corpus.idf(plist.size());
    for (const auto& post : plist) {
      const double tf = post.tf;
      const double dl = corpus.doc_lengths()[post.doc];
      acc[post.doc] += idf * tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * dl / avgdl));
    }
  }

  std::vector<std::pair<std::uint32_t, double>> ranked(acc.begin(), acc.end());
  const auto& docs = corpus.documents();
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return docs[a.first].doc_id < docs[b.first].doc_id;
  });
  if (ranked.size() > k) ranked.resize(k);

  std::vector<Hit> hits;
  hits.reserve(ranked.size());
  for (const auto& [i, s] : ranked) hits.push_back({docs[i], s});
  return hits;
}

// On-disk index: 8-byte magic, little-endian u32 version, then a cereal
// portable-binary payload.
inline constexpr char kIndexMagic[8] = {'C', 'F', 'B', 'M', '2', '5', 'I', 'X'};
inline constexpr std::uint32_t kIndexVersion = 1;

inline void save_index(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kIndexMagic, sizeof kIndexMagic);
  const unsigned char v[4] = {kIndexVersion & 0xff, (kIndexVersion >> 8) & 0xff,
                              (kIndexVersion >> 16) & 0xff, (kIndexVersion >> 24) & 0xff};
  out.write(reinterpret_cast<const char*>(v), 4);
  {
    cereal::PortableBinaryOutputArchive ar(out);
    ar(corpus);
  }
  if (!out) throw Error("write failed for " + path.string());
}

inline Corpus load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[8] = {};
  unsigned char v[4] = {};
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(v), 4);
  if (!in || !std::equal(magic, magic + 8, kIndexMagic)) {
    throw Error(path.string() + " is not a confuse index");
  }
  const std::uint32_t version = v[0] | (v[1] << 8) | (v[2] << 16) | (static_cast<std::uint32_t>(v[3]) << 24);
  if (version != kIndexVersion) {
    throw Error(path.string() + ": unsupported index version " + std::to_string(version));
  }
  Corpus c;
  try {
    cereal::PortableBinaryInputArchive ar(in);
    ar(c);
  } catch (const cereal::Exception& e) {
    throw Error(path.string() + ": corrupt index: " + e.what());
  }
  return c;
}

}  // namespace retrieval
}  // namespace confuse
