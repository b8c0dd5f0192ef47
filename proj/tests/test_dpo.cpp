#include <gtest/gtest.h>

#include "confuse/dpo/service.hpp"
#include "fixtures.hpp"
#include "tmpdir.hpp"

using namespace confuse;
using namespace confuse::dpo;
using namespace testing_support;

namespace {

retrieval::Corpus corpus() { return retrieval::Corpus::ingest(world_corpus()); }

LabelConfig labels() { return label_config(model_set()); }

Case capability_case() {
  Case c = mutrux_case();
  c.id = "cap";
  c.label = UncertaintySource::Capability;
  return c;
}

}  // namespace

TEST(Label, UsefulInquiryIsChosen) {
  Sandbox s;
  install_world(s);
  auto cp = corpus();
  auto out = label_candidate(s.gw(), mutrux_case(), "Is Floyd Mutrux a screenwriter?", labels(), &cp);
  EXPECT_EQ(out.verdict, Verdict::Chosen);
  EXPECT_EQ(out.resolved_answer, "yes");
  EXPECT_DOUBLE_EQ(out.score, 1.0);
}

TEST(Label, UselessInquiryIsRejected) {
  Sandbox s;
  install_world(s);
  auto cp = corpus();
  auto out = label_candidate(s.gw(), mutrux_case(), "Which tax law applies?", labels(), &cp);
  EXPECT_EQ(out.verdict, Verdict::Rejected);
  EXPECT_DOUBLE_EQ(out.score, 0.0);
}

TEST(Label, RejectsUnsupportedInput) {
  Sandbox s;
  auto cp = corpus();
  EXPECT_THROW(label_candidate(s.gw(), capability_case(), "why?", labels(), &cp), UnsupportedCaseError);
  EXPECT_THROW(label_candidate(s.gw(), mutrux_case(), "  ", labels(), &cp), ParameterError);
}

TEST(SeedPairs, GoodInquiryBeatsBadOne) {
  Sandbox s;
  s.on(Kind::GenerateInquiry, [](const llm::Request& r, const std::string&) -> std::optional<std::string> {
    const bool good = r.model.name == "gen-a";
    return reply({{"Inquiry", good ? "Is Floyd Mutrux a screenwriter?" : "Which tax law applies?"}, {"Choice", "A"}});
  });
  install_world(s);
  auto cp = corpus();
  auto cases = std::vector<Case>{mutrux_case(), capability_case()};
  auto ms = model_set();
  auto pairs = collect_seed_pairs(s.gw(), cases, ms.generators, labels(), &cp, 2);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].case_id, "mutrux");
  EXPECT_EQ(pairs[0].chosen, "Is Floyd Mutrux a screenwriter?");
  EXPECT_EQ(pairs[0].rejected, "Which tax law applies?");
  EXPECT_EQ(pairs[0].prompt, pair_prompt(mutrux_case()));
  EXPECT_EQ(pairs[0].provenance, Provenance::Seed);
  EXPECT_THROW(collect_seed_pairs(s.gw(), cases, {ms.generators[0]}, labels(), &cp), ParameterError);
}

TEST(SeedPairs, SolvedWithoutInquiryIsSkipped) {
  Sandbox s;
  s.always(Kind::AnswerQuery, "yes");
  install_world(s);
  auto cp = corpus();
  EXPECT_TRUE(collect_seed_pairs(s.gw(), {mutrux_case()}, model_set().generators, labels(), &cp).empty());
  EXPECT_EQ(s.gw().count_calls("dpo.baseline"), 1u);
}

TEST(OnlinePairs, JudgeOrdersTheInquiries) {
  Sandbox s;
  s.always(Kind::PairOnline, R"({"Thought": "second is sharper", "Better": 2})");
  auto p = pair_online(s.gw(), mutrux_case(), "Anything else?", "Is Floyd Mutrux a screenwriter?", role("judge"));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->chosen, "Is Floyd Mutrux a screenwriter?");
  EXPECT_EQ(p->rejected, "Anything else?");
  EXPECT_EQ(p->provenance, Provenance::OnlineJudge);
  EXPECT_THROW(pair_online(s.gw(), mutrux_case(), "a", "a", role("judge")), ParameterError);
}

TEST(OnlinePairs, UnusableVerdictSkips) {
  Sandbox s;
  s.always(Kind::PairOnline, R"({"Better": 3})");
  EXPECT_FALSE(pair_online(s.gw(), mutrux_case(), "a", "b", role("judge")));
}

TEST(OnPolicy, ReplacesOrAppends) {
  std::vector<PreferencePair> pairs{{"mutrux", "p", "good", "bad", Provenance::Seed},
                                    {"yoga", "q", "which city?", "hm", Provenance::Seed}};
  auto copy = pairs;
  EXPECT_EQ(apply_on_policy(pairs, mutrux_case(), "better", Verdict::Chosen), 1u);
  EXPECT_EQ(pairs[0].chosen, "better");
  EXPECT_EQ(pairs[0].provenance, Provenance::OnPolicy);
  EXPECT_EQ(pairs[1], copy[1]);

  EXPECT_EQ(apply_on_policy(copy, mutrux_case(), "worse", Verdict::Rejected, true), 1u);
  ASSERT_EQ(copy.size(), 3u);
  EXPECT_EQ(copy[2].rejected, "worse");
  EXPECT_EQ(copy[0].rejected, "bad");

  EXPECT_EQ(apply_on_policy(copy, mutrux_case(), "bad", Verdict::Chosen), 1u);
}

TEST(Pairs, JsonlRoundTrip) {
  TempDir dir("pairs");
  std::vector<PreferencePair> pairs{{"a", "prompt \"x\"\nline", "cé", "r", Provenance::Seed},
                                    {"b", "p", "c", "r", Provenance::OnPolicy},
                                    {"c", "p", "c", "r", Provenance::OnlineJudge}};
  write_pairs(dir / "p.jsonl", pairs);
  EXPECT_EQ(read_pairs(dir / "p.jsonl"), pairs);
  EXPECT_THROW(write_pairs(dir / "bad.jsonl", {{"a", "p", "same", "same", Provenance::Seed}}), ParameterError);
  EXPECT_THROW(provenance_from_string("human"), ParameterError);
}

class Service : public ::testing::Test {
 protected:
  void SetUp() override {
    install_world(sandbox_);
    auto train = mutrux_case();
    train.split = Split::Training;
    auto bench = yoga_case();
    bench.split = Split::Benchmark;
    auto cap = capability_case();
    cap.split = Split::Training;
    corpus_ = std::make_unique<retrieval::Corpus>(corpus());
    service_ = std::make_unique<EnvironmentService>(
        Environment{&sandbox_.gw(), labels(), corpus_.get(), {train, bench, cap}});
    client_ = std::make_unique<httplib::Client>("127.0.0.1", service_->port());
  }

  httplib::Result label(const std::string& body) { return client_->Post("/v1/label", body, "application/json"); }

  Sandbox sandbox_;
  std::unique_ptr<retrieval::Corpus> corpus_;
  std::unique_ptr<EnvironmentService> service_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(Service, HealthAndListing) {
  auto h = client_->Get("/healthz");
  ASSERT_TRUE(h);
  EXPECT_EQ(h->body, "ok");
  auto all = client_->Get("/v1/cases");
  EXPECT_EQ(nlohmann::json::parse(all->body).size(), 3u);
  auto train = client_->Get("/v1/cases?split=training");
  EXPECT_EQ(nlohmann::json::parse(train->body), nlohmann::json::array({"mutrux", "cap"}));
  EXPECT_EQ(client_->Get("/v1/cases?split=dev")->status, 400);
}

TEST_F(Service, CaseDetail) {
  auto r = client_->Get("/v1/case/mutrux");
  ASSERT_EQ(r->status, 200);
  auto j = nlohmann::json::parse(r->body);
  EXPECT_EQ(j.at("prompt"), pair_prompt(mutrux_case()));
  EXPECT_EQ(j.at("label"), "document");
  EXPECT_EQ(client_->Get("/v1/case/nope")->status, 404);
}

TEST_F(Service, Label) {
  auto r = label(R"({"case_id": "mutrux", "inquiry": "Is Floyd Mutrux a screenwriter?"})");
  ASSERT_EQ(r->status, 200) << r->body;
  auto j = nlohmann::json::parse(r->body);
  EXPECT_EQ(j.at("verdict"), "chosen");
  EXPECT_EQ(j.at("resolved_answer"), "yes");
  EXPECT_EQ(j.at("score"), 1.0);
  EXPECT_EQ(service_->label_calls(), 1u);
}

TEST_F(Service, LabelErrors) {
  EXPECT_EQ(label("not json")->status, 400);
  EXPECT_EQ(label(R"({"case_id": "mutrux"})")->status, 400);
  EXPECT_EQ(label(R"({"case_id": "mutrux", "inquiry": " "})")->status, 400);
  EXPECT_EQ(label(R"({"case_id": "zzz", "inquiry": "q"})")->status, 404);
  EXPECT_EQ(label(R"({"case_id": "cap", "inquiry": "q"})")->status, 422);
}
