#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "confuse/core/case_io.hpp"
#include "scripted.hpp"

namespace testing_support {

inline Document doc(std::string id, std::string title, std::string body, bool gold = false) {
  return Document{std::move(id), std::move(title), std::move(body), gold};
}

// Underspecified location: the user means New York.
inline Case yoga_case() {
  Case c;
  c.id = "yoga";
  c.dataset = Dataset::AmbigQA;
  c.original_query = "locate the best yoga class in New York";
  c.actual_query = "locate the best yoga class in my city";
  c.gold_documents = {doc("yoga-studios", "Yoga studios",
                          "Popular yoga studios include Bikram Yoga NYC in New York and Triyoga in London.", true)};
  c.actual_documents = c.gold_documents;
  c.clarification = "the city is New York";
  c.gold_answer = "Bikram Yoga NYC";
  c.gold_inquiry = "Missing Detail: the city\nGold Inquiry: Which city are you referring to?";
  c.label = UncertaintySource::Ambiguity;
  return c;
}

inline Document cline_doc() {
  return doc("cline", "Edward F. Cline", "Edward Francis Cline was an American screenwriter, actor and film director.",
             true);
}

inline Document mutrux_doc() {
  return doc("mutrux", "Floyd Mutrux", "Floyd Mutrux is an American screenwriter, producer and director.", true);
}

// The document about Floyd Mutrux is missing from the context.
inline Case mutrux_case() {
  Case c;
  c.id = "mutrux";
  c.dataset = Dataset::HotpotQA;
  c.original_query = "Are Edward F. Cline and Floyd Mutrux both screenwriters?";
  c.actual_query = c.original_query;
  c.gold_documents = {cline_doc(), mutrux_doc()};
  c.actual_documents = {cline_doc()};
  c.gold_answer = "yes";
  c.gold_inquiry = "Missing Detail: the document about Floyd Mutrux\nGold Inquiry: Is Floyd Mutrux a screenwriter?";
  c.label = UncertaintySource::Document;
  return c;
}

inline std::vector<Document> world_corpus() {
  auto cline = cline_doc();
  auto mutrux = mutrux_doc();
  cline.is_gold = mutrux.is_gold = false;
  return {cline,
          mutrux,
          doc("yoga-studios", "Yoga studios",
              "Popular yoga studios include Bikram Yoga NYC in New York and Triyoga in London."),
          doc("tax", "Tax law", "Tax law governs how public authorities assess and collect taxes."),
          doc("cats", "Cats", "The domestic cat is a small carnivorous mammal."),
          doc("screen", "Screenwriting", "A screenwriter writes scripts for films and television.")};
}

inline nlohmann::json rule(std::vector<std::string> all, std::string respond, std::vector<std::string> none = {}) {
  nlohmann::json r{{"all", std::move(all)}, {"respond", std::move(respond)}};
  if (!none.empty()) r["none"] = std::move(none);
  return r;
}

inline const std::string kSource = "Here are three kinds of actions";
inline const std::string kInquire = "Please generate your answer in json.";
inline const std::string kProbe = "Possible Answers:";
inline const std::string kUser = "Original Intention:";
inline const std::string kAnswer = "Please generate your answer within";
inline const std::string kCot = "generate your answer with reasoning steps";
inline const std::string kCorrect = "Ground Truth Answer:";
inline const std::string kUseful = "Reference Answer:";
inline const std::string kIq = "evaluate the quality of the inquiry";
inline const std::string kAskRetrieval = "the retrieved documents is satisfying";
inline const std::string kAskUser = "get a clarification to answer the question";

// Substring rules for the yoga and Mutrux cases. The answerer only gets
// them right after the matching interaction.
inline nlohmann::json world_rules() {
  return nlohmann::json::array({
      rule({kSource, "my city"}, "B"),
      rule({kSource, "Floyd Mutrux"}, "A"),
      rule({kInquire, "my city"}, reply({{"Inquiry", "Which city are you referring to?"}, {"Choice", "B"}})),
      rule({kInquire, "Floyd Mutrux"}, reply({{"Inquiry", "Is Floyd Mutrux a screenwriter?"}, {"Choice", "A"}})),
      rule({kAskUser, "my city"}, "Which city are you referring to?"),
      rule({kAskRetrieval, "Floyd Mutrux"}, "Is Floyd Mutrux a screenwriter?"),
      rule({kProbe, "my city"}, reply({{"Thought", "pick one"}, {"Response", "New York"}}), {"Possible Answers: ["}),
      rule({kProbe, "my city"}, reply({{"Thought", "another"}, {"Response", "London"}})),
      rule({kProbe, "Floyd Mutrux"}, reply({{"Thought", "title"}, {"Response", "Floyd Mutrux"}})),
      rule({"New Answer:"}, yes_no("Distinct", true)),
      rule({"\"Coherent\""}, yes_no("Coherent", false)),
      rule({kUser, "Which city"}, "New York"),
      rule({kAnswer, "my city", "Response: New York"}, "Bikram Yoga NYC"),
      rule({kAnswer, "my city"}, "Which city do you mean?"),
      rule({kAnswer, "Floyd Mutrux is an American screenwriter"}, "yes"),
      rule({kAnswer, "Floyd Mutrux"}, "I do not know."),
      rule({kCot, "my city"}, "It depends on the city."),
      rule({kCot, "Floyd Mutrux"}, "I do not know."),
      rule({kCorrect, "Ground Truth Answer: Bikram Yoga NYC\nCandidate Answer: Bikram Yoga NYC"},
           yes_no("Correct", true)),
      rule({kCorrect, "Ground Truth Answer: yes\nCandidate Answer: yes"}, yes_no("Correct", true)),
  });
}

inline nlohmann::json fallback_rules() {
  return nlohmann::json::array({
      rule({kCorrect}, yes_no("Correct", false)),
      rule({kUseful}, R"({"Thought": "off", "Usefulness": 1})"),
      rule({kIq}, R"({"step by step thinking": "direct", "quality of inquiry": 5})"),
      rule({kUser}, "the first one"),
  });
}

inline void install_rules(Sandbox& s, const nlohmann::json& rules) {
  for (const auto& r : rules) {
    llm::ScriptRule rule;
    rule.all = r.value("all", std::vector<std::string>{});
    rule.none = r.value("none", std::vector<std::string>{});
    rule.respond = r.at("respond").get<std::string>();
    s.backend().add_rule(std::move(rule));
  }
}

inline void install_world(Sandbox& s) {
  install_rules(s, world_rules());
  install_rules(s, fallback_rules());
}

// Twelve-case benchmark: yoga, Mutrux and ten synthetic cases keyed by a
// unique token. Two synthetic cases are misjudged and one is answered
// wrong so the report is not all ones.
struct E2E {
  std::vector<Case> bench;
  std::vector<Document> corpus;
  nlohmann::json rules = nlohmann::json::array();
};

inline E2E e2e_fixture() {
  E2E f;
  f.bench = {yoga_case(), mutrux_case()};
  f.corpus = world_corpus();
  auto synthetic = nlohmann::json::array();
  for (int i = 1; i <= 10; ++i) {
    const std::string t = i < 10 ? "zq0" + std::to_string(i) : "zq" + std::to_string(i);
    const auto label = i % 3 == 1 ? UncertaintySource::Document
                       : i % 3 == 2 ? UncertaintySource::Ambiguity
                                    : UncertaintySource::Capability;
    char letter = to_letter(label);
    if (i == 4) letter = 'B';
    if (i == 9) letter = 'A';

    Case c;
    c.id = t;
    c.dataset = i % 2 ? Dataset::HotpotQA : Dataset::TechQA;
    c.actual_query = "What is the " + t + " value?";
    c.original_query = label == UncertaintySource::Ambiguity ? "What is the " + t + " value in spring?" : c.actual_query;
    if (label == UncertaintySource::Ambiguity) c.clarification = "in spring";
    c.actual_documents = {doc(t + "-ctx", t + " context", t + " is a registered item.", true)};
    c.gold_documents = c.actual_documents;
    if (label == UncertaintySource::Document) c.gold_documents.push_back(doc(t + "-fact", t + " facts", "x", true));
    c.gold_answer = t + "-ans";
    if (label != UncertaintySource::Capability) c.gold_inquiry = "Missing Detail: " + t + "\nGold Inquiry: Which " + t + "?";
    c.label = label;
    f.bench.push_back(c);
    f.corpus.push_back(doc(t + "-fact", t + " facts", "The " + t + " value is " + t + "-ans."));

    // Keyed on the question so documents of other cases in the prompt do
    // not trigger these rules.
    const std::string q = "What is the " + t;
    const std::string ask = "Which " + t + " record is meant?";
    const std::string answer = i == 7 ? "unknown" : c.gold_answer;
    synthetic.push_back(rule({kSource, q}, std::string(1, letter)));
    synthetic.push_back(rule({kInquire, q}, reply({{"Inquiry", ask}, {"Choice", std::string(1, letter)}})));
    synthetic.push_back(rule({kAskUser, q}, ask));
    synthetic.push_back(rule({kAskRetrieval, q}, ask));
    synthetic.push_back(rule({kProbe, q}, reply({{"Thought", "-"}, {"Response", t + " facts"}})));
    synthetic.push_back(rule({kAnswer, q}, answer));
    synthetic.push_back(rule({kCot, q}, answer));
    synthetic.push_back(rule({kCorrect, "Ground Truth Answer: " + c.gold_answer + "\nCandidate Answer: " + c.gold_answer},
                             yes_no("Correct", true)));
    synthetic.push_back(rule({kUseful, "Reference Answer: " + c.gold_answer + "\nResponse: " + c.gold_answer},
                             R"({"Thought": "matches", "Usefulness": 4})"));
  }
  for (const auto& r : world_rules()) f.rules.push_back(r);
  for (const auto& r : synthetic) f.rules.push_back(r);
  for (const auto& r : fallback_rules()) f.rules.push_back(r);
  return f;
}

// Writes bench.jsonl, corpus.jsonl, script.json and config.json into dir.
inline void write_e2e(const std::filesystem::path& dir, const E2E& f, int jobs = 2) {
  std::filesystem::create_directories(dir);
  write_cases(dir / "bench.jsonl", f.bench);
  write_jsonl(dir / "corpus.jsonl", f.corpus, [](const Document& d) { return to_json(d); });
  std::ofstream(dir / "script.json") << nlohmann::json{{"rules", f.rules}}.dump(2) << '\n';
  nlohmann::json cfg{
      {"seed", 7},
      {"jobs", jobs},
      {"backend", {{"kind", "scripted"}, {"script", "script.json"}}},
      {"models",
       {{"evaluated", {{"name", "evaluated"}}},
        {"strong", {{"name", "strong"}}},
        {"judge", {{"name", "judge"}}},
        {"user_sim", {{"name", "user"}}}}},
      {"strategy", {{"repeats", 3}}},
      {"paths", {{"bench", "bench.jsonl"}, {"index", "corpus.idx"}}},
  };
  std::ofstream(dir / "config.json") << cfg.dump(2) << '\n';
}

}  // namespace testing_support
