#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "confuse/core/json.hpp"

namespace confuse::eval {

using Confusion = std::array<std::array<std::size_t, 3>, 3>;  // [gold][predicted]

struct ClassMetrics {
  double uca = 0.0;
  std::array<double, 3> precision{};
  std::array<double, 3> recall{};
  std::array<double, 3> f1{};
  std::array<std::size_t, 3> support{};
  double weighted_f1 = 0.0;
  std::size_t n = 0;
};

inline std::size_t idx(UncertaintySource s) { return static_cast<std::size_t>(s); }

// Precision or recall with a zero denominator is 0; so is F1 when both are.
inline ClassMetrics metrics_from_confusion(const Confusion& m) {
  ClassMetrics out;
  std::array<std::size_t, 3> predicted{};
  std::size_t correct = 0;
  for (std::size_t g = 0; g < 3; ++g) {
    for (std::size_t p = 0; p < 3; ++p) {
      out.support[g] += m[g][p];
      predicted[p] += m[g][p];
      out.n += m[g][p];
    }
    correct += m[g][g];
  }
  if (out.n == 0) return out;
  out.uca = static_cast<double>(correct) / static_cast<double>(out.n);
  for (std::size_t c = 0; c < 3; ++c) {
    const double tp = static_cast<double>(m[c][c]);
    out.precision[c] = predicted[c] ? tp / static_cast<double>(predicted[c]) : 0.0;
    out.recall[c] = out.support[c] ? tp / static_cast<double>(out.support[c]) : 0.0;
    const double s = out.precision[c] + out.recall[c];
    out.f1[c] = s > 0 ? 2.0 * out.precision[c] * out.recall[c] / s : 0.0;
    out.weighted_f1 += static_cast<double>(out.support[c]) / static_cast<double>(out.n) * out.f1[c];
  }
  return out;
}

inline ClassMetrics classification_metrics(const std::vector<Judgment>& judgments,
                                           const std::unordered_map<std::string, UncertaintySource>& gold) {
  Confusion m{};
  for (const auto& j : judgments) {
    auto it = gold.find(j.case_id);
    if (it == gold.end()) throw NotFoundError("no gold label for case '" + j.case_id + "'");
    ++m[idx(it->second)][idx(j.predicted)];
  }
  return metrics_from_confusion(m);
}

// Per-dataset figures for one repeat, or their mean over repeats.
struct DatasetMetrics {
  double aq = 0.0;
  double uca = 0.0;
  std::optional<double> iq;  // absent when no case had a gold and a generated inquiry
  std::array<double, 3> precision{};
  std::array<double, 3> recall{};
  double weighted_f1 = 0.0;
  std::size_t n_cases = 0;
};

// Field-wise arithmetic mean; iq averages only the inputs that have one.
inline DatasetMetrics mean_of(const std::vector<DatasetMetrics>& xs) {
  DatasetMetrics out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  double iq_sum = 0.0;
  std::size_t iq_n = 0;
  for (const auto& x : xs) {
    out.aq += x.aq / n;
    out.uca += x.uca / n;
    out.weighted_f1 += x.weighted_f1 / n;
    for (std::size_t c = 0; c < 3; ++c) {
      out.precision[c] += x.precision[c] / n;
      out.recall[c] += x.recall[c] / n;
    }
    out.n_cases += x.n_cases;
    if (x.iq) {
      iq_sum += *x.iq;
      ++iq_n;
    }
  }
  if (iq_n) out.iq = iq_sum / static_cast<double>(iq_n);
  return out;
}

inline ojson to_json(const DatasetMetrics& m) {
  ojson precision = ojson::object();
  ojson recall = ojson::object();
  for (UncertaintySource s : kAllSources) {
    precision[std::string(to_string(s))] = m.precision[idx(s)];
    recall[std::string(to_string(s))] = m.recall[idx(s)];
  }
  return ojson{{"aq", m.aq},
               {"uca", m.uca},
               {"iq", m.iq ? ojson(*m.iq) : ojson(nullptr)},
               {"precision", precision},
               {"recall", recall},
               {"weighted_f1", m.weighted_f1},
               {"n_cases", m.n_cases}};
}

inline DatasetMetrics dataset_metrics_from_json(const ojson& j) {
  DatasetMetrics m;
  m.aq = j.at("aq").get<double>();
  m.uca = j.at("uca").get<double>();
  if (!j.at("iq").is_null()) m.iq = j.at("iq").get<double>();
  for (UncertaintySource s : kAllSources) {
    m.precision[idx(s)] = j.at("precision").at(std::string(to_string(s))).get<double>();
    m.recall[idx(s)] = j.at("recall").at(std::string(to_string(s))).get<double>();
  }
  m.weighted_f1 = j.at("weighted_f1").get<double>();
  m.n_cases = j.at("n_cases").get<std::size_t>();
  return m;
}

// One audited (repeat, case) outcome.
struct CaseRow {
  int repeat = 0;
  std::string case_id;
  Dataset dataset = Dataset::Custom;
  UncertaintySource label = UncertaintySource::Document;
  UncertaintySource predicted = UncertaintySource::Document;
  std::vector<UncertaintySource> samples;
  std::optional<std::string> inquiry;
  Channel channel = Channel::None;
  std::string answer;
  bool answered_by_strong = false;
  double aq = 0.0;
  std::optional<double> iq;
  std::optional<std::string> error;
};

inline ojson to_json(const CaseRow& r) {
  ojson samples = ojson::array();
  for (auto s : r.samples) samples.push_back(std::string(to_string(s)));
  auto opt = [](const auto& v) { return v ? ojson(*v) : ojson(nullptr); };
  return ojson{{"repeat", r.repeat},
               {"case_id", r.case_id},
               {"dataset", std::string(to_string(r.dataset))},
               {"label", std::string(to_string(r.label))},
               {"predicted", r.error ? ojson(nullptr) : ojson(std::string(to_string(r.predicted)))},
               {"samples", samples},
               {"inquiry", opt(r.inquiry)},
               {"channel", std::string(to_string(r.channel))},
               {"answer", r.answer},
               {"answered_by_strong", r.answered_by_strong},
               {"aq", r.error ? ojson(nullptr) : ojson(r.aq)},
               {"iq", opt(r.iq)},
               {"error", opt(r.error)}};
}

// Aggregates one repeat's rows per dataset; failed rows are left out of
// every denominator.
inline std::map<Dataset, DatasetMetrics> aggregate_rows(const std::vector<CaseRow>& rows) {
  struct Acc {
    Confusion m{};
    double aq = 0.0;
    double iq = 0.0;
    std::size_t iq_n = 0;
    std::size_t n = 0;
  };
  std::map<Dataset, Acc> acc;
  for (const auto& r : rows) {
    if (r.error) continue;
    auto& a = acc[r.dataset];
    ++a.m[idx(r.label)][idx(r.predicted)];
    a.aq += r.aq;
    ++a.n;
    if (r.iq) {
      a.iq += *r.iq;
      ++a.iq_n;
    }
  }
  std::map<Dataset, DatasetMetrics> out;
  for (const auto& [ds, a] : acc) {
    auto cm = metrics_from_confusion(a.m);
    DatasetMetrics d;
    d.aq = a.aq / static_cast<double>(a.n);
    d.uca = cm.uca;
    if (a.iq_n) d.iq = a.iq / static_cast<double>(a.iq_n);
    d.precision = cm.precision;
    d.recall = cm.recall;
    d.weighted_f1 = cm.weighted_f1;
    d.n_cases = a.n;
    out[ds] = d;
  }
  return out;
}

struct MetricsReport {
  Strategy strategy = Strategy::Answer;
  int repeats = 0;
  std::uint64_t seed = 0;
  std::vector<std::map<Dataset, DatasetMetrics>> per_repeat;
  std::map<Dataset, DatasetMetrics> averaged;  // mean over repeats
  DatasetMetrics average;                      // mean of `averaged` over datasets
  std::size_t errors = 0;
  std::vector<CaseRow> per_case;
};

// Fills per_repeat, averaged and average from per_case rows.
inline void summarize(MetricsReport& r) {
  r.per_repeat.assign(static_cast<std::size_t>(r.repeats), {});
  std::vector<std::vector<CaseRow>> by_repeat(static_cast<std::size_t>(r.repeats));
  r.errors = 0;
  for (const auto& row : r.per_case) {
    if (row.repeat < 0 || row.repeat >= r.repeats) throw ParameterError("row repeat index out of range");
    by_repeat[static_cast<std::size_t>(row.repeat)].push_back(row);
    r.errors += row.error.has_value();
  }
  std::map<Dataset, std::vector<DatasetMetrics>> per_ds;
  for (std::size_t i = 0; i < by_repeat.size(); ++i) {
    r.per_repeat[i] = aggregate_rows(by_repeat[i]);
    for (const auto& [ds, m] : r.per_repeat[i]) per_ds[ds].push_back(m);
  }
  r.averaged.clear();
  std::vector<DatasetMetrics> ds_means;
  for (const auto& [ds, ms] : per_ds) {
    auto m = mean_of(ms);
    m.n_cases = ms.empty() ? 0 : m.n_cases / ms.size();
    r.averaged[ds] = m;
    ds_means.push_back(m);
  }
  r.average = mean_of(ds_means);
}

inline ojson to_json(const MetricsReport& r) {
  auto ds_map = [](const std::map<Dataset, DatasetMetrics>& m) {
    ojson o = ojson::object();
    for (const auto& [ds, v] : m) o[std::string(to_string(ds))] = to_json(v);
    return o;
  };
  ojson per_repeat = ojson::array();
  for (const auto& m : r.per_repeat) per_repeat.push_back(ds_map(m));
  ojson rows = ojson::array();
  for (const auto& row : r.per_case) rows.push_back(to_json(row));
  return ojson{{"strategy", std::string(to_string(r.strategy))},
               {"repeats", r.repeats},
               {"seed", r.seed},
               {"per_repeat", per_repeat},
               {"averaged", ds_map(r.averaged)},
               {"average", to_json(r.average)},
               {"errors", r.errors},
               {"per_case", rows}};
}

}  // namespace confuse::eval
