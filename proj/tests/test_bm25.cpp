#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "confuse/retrieval/bm25.hpp"
#include "corpora.hpp"
#include "oracles.hpp"
#include "tmpdir.hpp"

using namespace confuse;
using namespace confuse::retrieval;

namespace {

Corpus tiny() {
  return Corpus::ingest({{"d1", "", "yoga london", false}, {"d2", "", "tax law", false}, {"d3", "", "cats", false}});
}

}  // namespace

TEST(Bm25, SingleMatchingDocument) {
  auto hits = search(tiny(), "yoga", 2);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].document.doc_id, "d1");
}

TEST(Bm25, NoOverlapGivesEmpty) { EXPECT_TRUE(search(tiny(), "quantum", 2).empty()); }

TEST(Bm25, Errors) {
  EXPECT_THROW(search(tiny(), "yoga", 0), ParameterError);
  EXPECT_THROW(search(Corpus{}, "yoga", 1), ParameterError);
  EXPECT_THROW(Corpus::ingest({{"a", "", "x", false}, {"a", "", "y", false}}), DuplicateIdError);
  EXPECT_THROW(Corpus::ingest({{"a", "", "", false}}), ParameterError);
  EXPECT_THROW(Corpus::ingest({{"a", "", "!!", false}}), ParameterError);
}

TEST(Bm25, HandComputedScore) {
  // N=3, df(yoga)=1, |d1|=2, avgdl=5/3.
  const double idf = std::log((3 - 1 + 0.5) / (1 + 0.5) + 1);
  const double expected = idf * 1 * 2.2 / (1 + 1.2 * (0.25 + 0.75 * 2 / (5.0 / 3.0)));
  EXPECT_NEAR(search(tiny(), "yoga yoga", 1)[0].score, expected, 1e-12);
}

TEST(Bm25, TiesBreakByDocId) {
  auto c = Corpus::ingest({{"b", "", "same words", false}, {"a", "", "same words", false}});
  auto hits = search(c, "same", 2);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].document.doc_id, "a");
  EXPECT_EQ(hits[0].score, hits[1].score);
}

TEST(Bm25, MatchesBruteForceOn20Docs) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Document> docs;
    while (docs.size() != 20) docs = testing_support::random_corpus(rng, 20);
    auto corpus = Corpus::ingest(docs);
    auto q = testing_support::random_query(rng);
    auto got = search(corpus, q, 20);
    auto want = oracle::bm25(docs, q, 20);
    ASSERT_EQ(got.size(), want.size()) << q;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].document.doc_id, want[i].doc_id);
      EXPECT_NEAR(got[i].score, want[i].score, 1e-9);
    }
  }
}

TEST(Bm25, CustomParameters) {
  std::mt19937_64 rng(5);
  auto docs = testing_support::random_corpus(rng, 30);
  auto corpus = Corpus::ingest(docs, {2.0, 0.3});
  auto got = search(corpus, "yoga city", 5);
  auto want = oracle::bm25(docs, "yoga city", 5, 2.0, 0.3);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i].score, want[i].score, 1e-9);
}

TEST(Bm25, IndexFileRoundTrip) {
  testing_support::TempDir dir("idx");
  std::mt19937_64 rng(9);
  auto docs = testing_support::random_corpus(rng);
  auto corpus = Corpus::ingest(docs, {1.5, 0.5});
  save_index(corpus, dir / "c.idx");
  auto back = load_index(dir / "c.idx");
  EXPECT_EQ(back.documents(), corpus.documents());
  EXPECT_EQ(back.params().k1, 1.5);
  auto a = search(corpus, "yoga tax", 10);
  auto b = search(back, "yoga tax", 10);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].score, b[i].score);
}

TEST(Bm25, LoadRejectsForeignFiles) {
  testing_support::TempDir dir("idx");
  std::ofstream(dir / "bad.idx") << "definitely not an index";
  EXPECT_THROW(load_index(dir / "bad.idx"), Error);
  EXPECT_THROW(load_index(dir / "missing.idx"), Error);
}
