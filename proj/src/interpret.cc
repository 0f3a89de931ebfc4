/*
 * Copyright 2026 The RuleFit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rulefit/interpret.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rulefit/errors.h"
#include "rulefit/parallel.h"
#include "rulefit/random.h"

namespace rulefit {
namespace {

std::vector<double> Scaled(std::span<const double> v, double max) {
  std::vector<double> out(v.size(), 0.0);
  if (max > 0.0) {
    for (size_t i = 0; i < v.size(); ++i) out[i] = 100.0 * v[i] / max;
  }
  return out;
}

double MaxOf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

std::vector<size_t> PickRows(size_t n, size_t cap, bool exact, uint64_t seed) {
  if (exact || cap == 0 || cap >= n) {
    std::vector<size_t> all(n);
    std::iota(all.begin(), all.end(), size_t{0});
    return all;
  }
  Rng rng(seed);
  return rng.SampleWithoutReplacement(n, cap);
}

HValue Ratio(double num, double den) {
  HValue h;
  if (!(den > 0.0)) {
    h.zero_denominator = true;
    return h;
  }
  h.value = std::sqrt(std::max(0.0, num / den));
  return h;
}

double SumSquares(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

std::vector<double> ImportanceReport::RelativeVariables() const {
  return Scaled(variable_importance, MaxOf(variable_importance));
}

std::vector<double> ImportanceReport::RelativeRules() const {
  return Scaled(rule_importance,
                std::max(MaxOf(rule_importance), MaxOf(linear_importance)));
}

std::vector<double> ImportanceReport::RelativeLinear() const {
  return Scaled(linear_importance,
                std::max(MaxOf(rule_importance), MaxOf(linear_importance)));
}

void AssignVariableImportance(const EnsembleModel& model, ImportanceReport& report) {
  report.variable_importance.assign(model.num_variables(), 0.0);
  for (size_t t = 0; t < model.linear.size(); ++t) {
    report.variable_importance[model.linear[t].variable] += report.linear_importance[t];
  }
  for (size_t k = 0; k < model.rules.size(); ++k) {
    const Rule& rule = model.rules[k].rule;
    const double share =
        report.rule_importance[k] / static_cast<double>(rule.num_variables());
    for (const Conjunct& c : rule.conjuncts) report.variable_importance[c.variable] += share;
  }
}

ImportanceReport GlobalImportance(const EnsembleModel& model) {
  ImportanceReport report;
  report.scope = ScopeKind::kGlobal;
  for (const RuleTerm& t : model.rules) {
    const double s = t.rule.support;
    report.rule_importance.push_back(std::abs(t.coefficient) * std::sqrt(s * (1.0 - s)));
  }
  for (const LinearModelTerm& t : model.linear) {
    report.linear_importance.push_back(std::abs(t.coefficient) * t.std);
  }
  AssignVariableImportance(model, report);
  return report;
}

ImportanceReport LocalImportance(const EnsembleModel& model,
                                 std::span<const double> row) {
  ImportanceReport report;
  report.scope = ScopeKind::kPoint;
  report.num_rows = 1;
  for (const RuleTerm& t : model.rules) {
    const double r = t.rule.Evaluate(row) ? 1.0 : 0.0;
    report.rule_importance.push_back(std::abs(t.coefficient) *
                                     std::abs(r - t.rule.support));
  }
  for (const LinearModelTerm& t : model.linear) {
    const double l = Winsorize(row[t.variable], t.lower, t.upper);
    report.linear_importance.push_back(std::abs(t.coefficient) * std::abs(l - t.mean));
  }
  AssignVariableImportance(model, report);
  return report;
}

ImportanceReport RegionImportance(const EnsembleModel& model, const Dataset& data,
                                  std::span<const size_t> rows) {
  if (rows.empty()) throw DomainError("importance region selects no rows");
  model.CheckCompatible(data);
  ImportanceReport report;
  report.scope = ScopeKind::kRegion;
  report.num_rows = rows.size();
  report.rule_importance.assign(model.rules.size(), 0.0);
  report.linear_importance.assign(model.linear.size(), 0.0);
  for (size_t i : rows) {
    if (i >= data.num_rows()) throw DomainError("region row out of range");
    for (size_t k = 0; k < model.rules.size(); ++k) {
      const RuleTerm& t = model.rules[k];
      const double r = t.rule.EvaluateRow(data, i) ? 1.0 : 0.0;
      report.rule_importance[k] += std::abs(t.coefficient) * std::abs(r - t.rule.support);
    }
    for (size_t j = 0; j < model.linear.size(); ++j) {
      const LinearModelTerm& t = model.linear[j];
      const double l = Winsorize(data.value(i, t.variable), t.lower, t.upper);
      report.linear_importance[j] += std::abs(t.coefficient) * std::abs(l - t.mean);
    }
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (double& v : report.rule_importance) v *= inv;
  for (double& v : report.linear_importance) v *= inv;
  AssignVariableImportance(model, report);
  return report;
}

std::vector<size_t> PredictionRegion(const EnsembleModel& model, const Dataset& data,
                                     double q, bool top) {
  if (!(q > 0.0 && q <= 1.0)) throw ConfigError("region fraction must lie in (0, 1]");
  const std::vector<double> f = model.PredictAll(data);
  std::vector<size_t> order(f.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return top ? f[a] > f[b] : f[a] < f[b];
  });
  const size_t count = std::clamp<size_t>(
      static_cast<size_t>(std::llround(q * static_cast<double>(f.size()))), 1, f.size());
  std::vector<size_t> rows(order.begin(), order.begin() + count);
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::vector<double> Centered(std::vector<double> v) {
  if (v.empty()) return v;
  // A constant vector centers to exact zeros.
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) {
    std::fill(v.begin(), v.end(), 0.0);
    return v;
  }
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v) x -= mean;
  return v;
}

PartialDependence::PartialDependence(const EnsembleModel& model, const Dataset& data,
                                     const PdOptions& options)
    : model_(model), data_(data) {
  model.CheckCompatible(data);
  if (data.num_rows() == 0) throw DomainError("partial dependence needs data rows");
  eval_rows_ = PickRows(data.num_rows(), options.max_eval_points, options.exact,
                        DeriveSeed(options.seed, 101));
  integration_rows_ = PickRows(data.num_rows(), options.max_integration_rows,
                               options.exact, DeriveSeed(options.seed, 202));
  linear_means_.reserve(model.linear.size());
  for (const LinearModelTerm& t : model.linear) {
    double m = 0.0;
    for (size_t i : integration_rows_) {
      m += Winsorize(data.value(i, t.variable), t.lower, t.upper);
    }
    linear_means_.push_back(t.coefficient * m /
                            static_cast<double>(integration_rows_.size()));
  }
}

std::vector<double> PartialDependence::EvaluateMask(
    const std::vector<char>& in_s, size_t count,
    const std::function<double(size_t, size_t)>& value) const {
  std::vector<double> f(count, model_.intercept);
  const double inv_rows = 1.0 / static_cast<double>(integration_rows_.size());
  std::vector<const Conjunct*> inside;
  std::vector<const Conjunct*> outside;
  for (const RuleTerm& t : model_.rules) {
    inside.clear();
    outside.clear();
    for (const Conjunct& c : t.rule.conjuncts) {
      (in_s[c.variable] ? inside : outside).push_back(&c);
    }
    // Mean over integration rows of the factor outside s.
    double p = 1.0;
    if (!outside.empty()) {
      size_t hits = 0;
      for (size_t i : integration_rows_) {
        bool all = true;
        for (const Conjunct* c : outside) {
          if (!c->Holds(data_.value(i, c->variable))) {
            all = false;
            break;
          }
        }
        hits += all ? 1 : 0;
      }
      p = static_cast<double>(hits) * inv_rows;
    }
    const double w = t.coefficient * p;
    if (w == 0.0) continue;
    if (inside.empty()) {
      for (double& v : f) v += w;
      continue;
    }
    for (size_t e = 0; e < count; ++e) {
      bool all = true;
      for (const Conjunct* c : inside) {
        if (!c->Holds(value(c->variable, e))) {
          all = false;
          break;
        }
      }
      if (all) f[e] += w;
    }
  }
  for (size_t j = 0; j < model_.linear.size(); ++j) {
    const LinearModelTerm& t = model_.linear[j];
    if (in_s[t.variable]) {
      for (size_t e = 0; e < count; ++e) {
        f[e] += t.coefficient * Winsorize(value(t.variable, e), t.lower, t.upper);
      }
    } else {
      for (double& v : f) v += linear_means_[j];
    }
  }
  return f;
}

std::vector<double> PartialDependence::Evaluate(
    std::span<const size_t> vars, std::span<const std::vector<double>> points) const {
  std::vector<char> in_s(model_.num_variables(), 0);
  std::vector<size_t> slot(model_.num_variables(), 0);
  for (size_t v = 0; v < vars.size(); ++v) {
    if (vars[v] >= in_s.size()) throw DomainError("variable index out of range");
    in_s[vars[v]] = 1;
    slot[vars[v]] = v;
  }
  for (const auto& p : points) {
    if (p.size() != vars.size()) throw DomainError("point has wrong dimension");
  }
  return EvaluateMask(in_s, points.size(),
                      [&](size_t var, size_t e) { return points[e][slot[var]]; });
}

std::vector<double> PartialDependence::AtEvalRows(std::span<const size_t> vars) const {
  std::vector<char> in_s(model_.num_variables(), 0);
  for (size_t v : vars) {
    if (v >= in_s.size()) throw DomainError("variable index out of range");
    in_s[v] = 1;
  }
  return Centered(EvaluateMask(in_s, eval_rows_.size(), [&](size_t var, size_t e) {
    return data_.value(eval_rows_[e], var);
  }));
}

std::vector<double> PartialDependence::ComplementAtEvalRows(size_t j) const {
  if (j >= model_.num_variables()) throw DomainError("variable index out of range");
  std::vector<char> in_s(model_.num_variables(), 1);
  in_s[j] = 0;
  return Centered(EvaluateMask(in_s, eval_rows_.size(), [&](size_t var, size_t e) {
    return data_.value(eval_rows_[e], var);
  }));
}

std::vector<double> PartialDependence::FullAtEvalRows() const {
  std::vector<double> f(eval_rows_.size());
  for (size_t e = 0; e < f.size(); ++e) f[e] = model_.PredictRow(data_, eval_rows_[e]);
  return Centered(std::move(f));
}

HValue HTotal(const PartialDependence& pd, size_t j) {
  const size_t one[] = {j};
  const std::vector<double> f = pd.FullAtEvalRows();
  const std::vector<double> fj = pd.AtEvalRows(one);
  const std::vector<double> rest = pd.ComplementAtEvalRows(j);
  double num = 0.0;
  for (size_t e = 0; e < f.size(); ++e) {
    const double d = f[e] - fj[e] - rest[e];
    num += d * d;
  }
  return Ratio(num, SumSquares(f));
}

HValue HPair(const PartialDependence& pd, size_t j, size_t k, bool importance_weighted) {
  if (j == k) throw DomainError("pair statistic needs two distinct variables");
  const size_t vj[] = {j};
  const size_t vk[] = {k};
  const size_t vjk[] = {j, k};
  const std::vector<double> fj = pd.AtEvalRows(vj);
  const std::vector<double> fk = pd.AtEvalRows(vk);
  const std::vector<double> fjk = pd.AtEvalRows(vjk);
  double num = 0.0;
  for (size_t e = 0; e < fjk.size(); ++e) {
    const double d = fjk[e] - fj[e] - fk[e];
    num += d * d;
  }
  const double den = importance_weighted ? SumSquares(pd.FullAtEvalRows())
                                         : SumSquares(fjk);
  return Ratio(num, den);
}

HValue HTriple(const PartialDependence& pd, size_t j, size_t k, size_t l,
               bool importance_weighted) {
  if (j == k || j == l || k == l) {
    throw DomainError("triple statistic needs three distinct variables");
  }
  const size_t vj[] = {j};
  const size_t vk[] = {k};
  const size_t vl[] = {l};
  const size_t vjk[] = {j, k};
  const size_t vjl[] = {j, l};
  const size_t vkl[] = {k, l};
  const size_t vjkl[] = {j, k, l};
  const std::vector<double> fj = pd.AtEvalRows(vj);
  const std::vector<double> fk = pd.AtEvalRows(vk);
  const std::vector<double> fl = pd.AtEvalRows(vl);
  const std::vector<double> fjk = pd.AtEvalRows(vjk);
  const std::vector<double> fjl = pd.AtEvalRows(vjl);
  const std::vector<double> fkl = pd.AtEvalRows(vkl);
  const std::vector<double> fjkl = pd.AtEvalRows(vjkl);
  double num = 0.0;
  for (size_t e = 0; e < fjkl.size(); ++e) {
    const double d = fjkl[e] - fjk[e] - fjl[e] - fkl[e] + fj[e] + fk[e] + fl[e];
    num += d * d;
  }
  const double den = importance_weighted ? SumSquares(pd.FullAtEvalRows())
                                         : SumSquares(fjkl);
  return Ratio(num, den);
}

std::vector<HValue> ComputeH(const EnsembleModel& model, const Dataset& data,
                             std::span<const HRequest> requests,
                             const HOptions& options) {
  const PartialDependence pd(model, data, options.pd);
  std::vector<HValue> out;
  out.reserve(requests.size());
  for (const HRequest& r : requests) {
    const size_t need = r.kind == HKind::kTotal ? 1 : (r.kind == HKind::kPair ? 2 : 3);
    if (r.vars.size() != need) throw DomainError("interaction request has wrong arity");
    switch (r.kind) {
      case HKind::kTotal:
        out.push_back(HTotal(pd, r.vars[0]));
        break;
      case HKind::kPair:
        out.push_back(HPair(pd, r.vars[0], r.vars[1], options.importance_weighted));
        break;
      case HKind::kTriple:
        out.push_back(HTriple(pd, r.vars[0], r.vars[1], r.vars[2],
                              options.importance_weighted));
        break;
    }
  }
  return out;
}

std::vector<HRequest> EnumerateRequests(size_t order, std::span<const size_t> vars) {
  std::vector<HRequest> out;
  const size_t n = vars.size();
  if (order == 1) {
    for (size_t a = 0; a < n; ++a) out.push_back({HKind::kTotal, {vars[a]}});
  } else if (order == 2) {
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = a + 1; b < n; ++b) out.push_back({HKind::kPair, {vars[a], vars[b]}});
    }
  } else if (order == 3) {
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = a + 1; b < n; ++b) {
        for (size_t c = b + 1; c < n; ++c) {
          out.push_back({HKind::kTriple, {vars[a], vars[b], vars[c]}});
        }
      }
    }
  } else {
    throw ConfigError("interaction order must be 1, 2 or 3");
  }
  return out;
}

EnsembleModel FitAdditiveReference(const Dataset& data, const PipelineConfig& config,
                                   size_t threads) {
  PipelineConfig additive = config;
  additive.ensemble.mean_tree_size = 2.0;
  return FitModel(data, additive, threads);
}

std::vector<double> NullResponse(const Dataset& data,
                                 std::span<const double> additive_fit, Rng& rng) {
  const size_t n = data.num_rows();
  if (additive_fit.size() != n) throw DomainError("additive fit length mismatch");
  const std::span<const double> y = data.response();
  std::vector<double> out(n);
  if (data.task() == Task::kRegression) {
    const std::vector<size_t> p = rng.Permutation(n);
    for (size_t i = 0; i < n; ++i) {
      out[i] = additive_fit[i] + (y[p[i]] - additive_fit[p[i]]);
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      const double prob = std::clamp((1.0 + additive_fit[i]) / 2.0, 0.0, 1.0);
      out[i] = rng.Uniform() < prob ? 1.0 : -1.0;
    }
  }
  return out;
}

NullSummary NullDistribution(const Dataset& data, const PipelineConfig& config,
                             const EnsembleModel& additive,
                             std::span<const HRequest> requests,
                             const HOptions& options, size_t reps, uint64_t seed,
                             size_t threads) {
  if (reps < 2) throw ConfigError("null distribution needs at least two replications");
  const std::vector<double> fa = additive.PredictAll(data);
  NullSummary summary;
  summary.requests.assign(requests.begin(), requests.end());
  summary.reps = reps;
  summary.values.resize(reps);
  ParallelFor(reps, threads, [&](size_t r) {
    const uint64_t rep_seed = DeriveSeed(seed, r);
    Rng rng(rep_seed);
    const Dataset null_data = data.WithResponse(NullResponse(data, fa, rng), data.task());
    PipelineConfig rep_config = config;
    rep_config.seed = DeriveSeed(rep_seed, 1);
    const EnsembleModel refit = FitModel(null_data, rep_config, 1);
    const std::vector<HValue> h = ComputeH(refit, null_data, requests, options);
    summary.values[r].reserve(h.size());
    for (const HValue& v : h) summary.values[r].push_back(v.value);
  });
  summary.mean.assign(requests.size(), 0.0);
  summary.std.assign(requests.size(), 0.0);
  for (size_t q = 0; q < requests.size(); ++q) {
    double m = 0.0;
    for (size_t r = 0; r < reps; ++r) m += summary.values[r][q];
    m /= static_cast<double>(reps);
    double ss = 0.0;
    for (size_t r = 0; r < reps; ++r) {
      ss += (summary.values[r][q] - m) * (summary.values[r][q] - m);
    }
    summary.mean[q] = m;
    summary.std[q] = std::sqrt(ss / static_cast<double>(reps - 1));
  }
  return summary;
}

std::vector<InteractionEntry> ExcessStatistics(std::span<const HRequest> requests,
                                               std::span<const HValue> raw,
                                               const NullSummary& null) {
  if (raw.size() != requests.size()) {
    throw DomainError("statistic values do not match the requests");
  }
  const bool has_null = null.reps > 0;
  if (has_null && (null.mean.size() != requests.size() ||
                   null.std.size() != requests.size())) {
    throw DomainError("null summary does not match the requested statistics");
  }
  if (has_null && !null.requests.empty()) {
    for (size_t q = 0; q < requests.size(); ++q) {
      if (null.requests[q].kind != requests[q].kind ||
          null.requests[q].vars != requests[q].vars) {
        throw DomainError("null statistic kind differs from the raw statistic");
      }
    }
  }
  std::vector<InteractionEntry> out(requests.size());
  for (size_t q = 0; q < requests.size(); ++q) {
    InteractionEntry& e = out[q];
    e.request = requests[q];
    e.h = raw[q].value;
    e.zero_denominator = raw[q].zero_denominator;
    if (has_null) {
      e.null_mean = null.mean[q];
      e.null_std = null.std[q];
      e.reps = null.reps;
    }
    e.excess = e.h - e.null_mean;
  }
  return out;
}

std::string RequestLabel(const HRequest& request, std::span<const Column> schema) {
  std::string label;
  for (size_t v = 0; v < request.vars.size(); ++v) {
    if (v > 0) label += ':';
    const size_t j = request.vars[v];
    label += j < schema.size() ? schema[j].name : std::to_string(j);
  }
  return label;
}

}  // namespace rulefit
