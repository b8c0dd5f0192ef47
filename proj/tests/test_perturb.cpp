#include <gtest/gtest.h>

#include <algorithm>

#include "confuse/retrieval/perturb.hpp"
#include "fixtures.hpp"

using namespace confuse;
using namespace confuse::retrieval;
using testing_support::doc;

namespace {

std::vector<Document> gold() {
  return {doc("g1", "Edward F. Cline", "Edward Cline was a screenwriter.", true),
          doc("g2", "Floyd Mutrux", "Floyd Mutrux is a screenwriter.", true),
          doc("g3", "Film", "Films are written by screenwriters.", true)};
}

Corpus corpus() {
  std::vector<Document> docs = gold();
  for (auto& d : docs) d.is_gold = false;
  for (int i = 0; i < 8; ++i) docs.push_back(doc("x" + std::to_string(i), "Screenwriter " + std::to_string(i), "screenwriter film"));
  return Corpus::ingest(docs);
}

}  // namespace

TEST(Perturb, DropsAtLeastOneAndFills) {
  auto c = corpus();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto p = perturb_documents(gold(), c, "screenwriter Mutrux Cline", {0.5, 5, seed});
    EXPECT_FALSE(p.dropped.empty());
    EXPECT_EQ(p.documents.size(), 5u);
    EXPECT_FALSE(p.underfilled);
    for (const auto& id : p.dropped) {
      EXPECT_TRUE(std::none_of(p.documents.begin(), p.documents.end(), [&](const Document& d) { return d.doc_id == id; }));
    }
  }
}

TEST(Perturb, SeedDeterministic) {
  auto c = corpus();
  auto a = perturb_documents(gold(), c, "screenwriter", {0.5, 5, 11});
  auto b = perturb_documents(gold(), c, "screenwriter", {0.5, 5, 11});
  EXPECT_EQ(a.documents, b.documents);
  EXPECT_EQ(a.dropped, b.dropped);
}

TEST(Perturb, DropAllWithProbabilityOne) {
  auto p = perturb_documents(gold(), corpus(), "screenwriter", {1.0, 5, 0});
  EXPECT_EQ(p.dropped.size(), 3u);
  for (const auto& d : p.documents) {
    EXPECT_FALSE(d.is_gold);
    EXPECT_EQ(d.doc_id[0], 'x');
  }
}

TEST(Perturb, KeptGoldComesFirst) {
  auto p = perturb_documents(gold(), corpus(), "screenwriter", {0.2, 5, 3});
  std::size_t kept = gold().size() - p.dropped.size();
  for (std::size_t i = 0; i < kept; ++i) EXPECT_TRUE(p.documents[i].is_gold);
}

TEST(Perturb, UnderfilledWhenCorpusTooSmall) {
  auto c = Corpus::ingest({doc("only", "", "screenwriter")});
  auto p = perturb_documents(gold(), c, "screenwriter", {1.0, 5, 0});
  EXPECT_TRUE(p.underfilled);
  EXPECT_EQ(p.documents.size(), 1u);
}

TEST(Perturb, Preconditions) {
  EXPECT_THROW(perturb_documents({}, corpus(), "q", {}), ParameterError);
  EXPECT_THROW(perturb_documents(gold(), corpus(), "q", {0.0, 5, 0}), ParameterError);
  EXPECT_THROW(perturb_documents(gold(), corpus(), "q", {0.5, 0, 0}), ParameterError);
}
