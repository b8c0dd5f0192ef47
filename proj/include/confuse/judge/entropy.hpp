#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "confuse/llm/ask.hpp"
#include "confuse/prompts.hpp"
#include "confuse/resolve/answer.hpp"
#include "confuse/roles.hpp"

namespace confuse::judge {

// XD: query and documents. XC: query and clarification. XDC: all three.
enum class Conditioning { XD, XC, XDC };

inline std::string_view to_string(Conditioning c) {
  switch (c) {
    case Conditioning::XD: return "XD";
    case Conditioning::XC: return "XC";
    case Conditioning::XDC: return "XDC";
  }
  return "XD";
}

inline Conditioning conditioning_from_string(std::string_view s) {
  if (s == "XD" || s == "xd") return Conditioning::XD;
  if (s == "XC" || s == "xc") return Conditioning::XC;
  if (s == "XDC" || s == "xdc") return Conditioning::XDC;
  throw ParameterError("unknown conditioning '" + std::string(s) + "'");
}

struct EntropyEstimate {
  double value = 0.0;  // nats
  std::vector<int> cluster_sizes;
  int n_samples = 0;
  std::vector<std::string> answers;
};

// -sum (k/n) ln(k/n) over cluster sizes k.
inline double cluster_entropy(std::span<const int> sizes) {
  const double n = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  double h = 0.0;
  for (int k : sizes) {
    if (k <= 0) throw ParameterError("cluster sizes must be positive");
    const double p = k / n;
    h -= p * std::log(p);
  }
  return h == 0.0 ? 0.0 : h;  // no negative zero
}

// Union-find over pairwise equivalence. Pairs already in one cluster are
// not asked again, so the closure is transitive. Sizes come out in order
// of each cluster's first member.
inline std::vector<int> cluster_answers(const std::vector<std::string>& answers,
                                        const std::function<bool(std::size_t, std::size_t)>& equivalent) {
  std::vector<std::size_t> parent(answers.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < answers.size(); ++i) {
    for (std::size_t j = i + 1; j < answers.size(); ++j) {
      std::size_t a = find(i), b = find(j);
      if (a == b) continue;
      if (equivalent(i, j)) parent[b] = a;
    }
  }
  std::vector<int> sizes;
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    std::size_t r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      roots.push_back(r);
      sizes.push_back(1);
    } else {
      ++sizes[static_cast<std::size_t>(it - roots.begin())];
    }
  }
  return sizes;
}

inline bool judged_equivalent(llm::Gateway& gw, const std::string& question, const std::string& a,
                              const std::string& b, const Role& judge) {
  auto p = prompts::render(prompts::kJudgeEquivalent, {question, a, b});
  return llm::ask_value<bool>(
      gw, judge.model, judge.params, std::move(p), "Equivalent",
      [](const llm::Record& v) { return llm::parse_yes_no(v); },
      "The value of \"Equivalent\" must be \"yes\" or \"no\". Respond with valid JSON only.", "entropy.equivalent");
}

// Samples n answers under the chosen conditioning and returns the entropy
// of their semantic clusters. Identical (normalized) answers are merged
// without a judge call; otherwise a pair is equivalent if the judge says
// so in either order.
inline EntropyEstimate estimate_answer_entropy(llm::Gateway& gw, const Case& c, Conditioning cond, const Role& model,
                                               const Role& judge, int n) {
  if (n < 2) throw ParameterError("estimate_answer_entropy needs n >= 2");
  if (!(model.params.temperature > 0.0)) throw ParameterError("entropy sampling needs temperature > 0");
  if (cond != Conditioning::XD && !c.clarification) {
    throw ParameterError("conditioning " + std::string(to_string(cond)) + " needs a clarification");
  }

  Case asked = c;
  InteractionTranscript t;
  if (cond == Conditioning::XC) asked.actual_documents.clear();
  if (cond != Conditioning::XD) t.turns.push_back({Channel::User, "Please clarify the query.", *c.clarification});

  EntropyEstimate out;
  out.n_samples = n;
  const auto base = model.seed_or(0);
  for (int i = 0; i < n; ++i) {
    out.answers.push_back(resolve::answer_query(gw, asked, t, model.seeded(base + i), false, std::nullopt,
                                                "entropy.sample"));
  }
  out.cluster_sizes = cluster_answers(out.answers, [&](std::size_t i, std::size_t j) {
    const auto& a = out.answers[i];
    const auto& b = out.answers[j];
    if (text::normalize(a) == text::normalize(b)) return true;
    return judged_equivalent(gw, c.actual_query, a, b, judge) || judged_equivalent(gw, c.actual_query, b, a, judge);
  });
  out.value = cluster_entropy(out.cluster_sizes);
  return out;
}

}  // namespace confuse::judge
