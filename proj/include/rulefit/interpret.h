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

#ifndef RULEFIT_INTERPRET_H_
#define RULEFIT_INTERPRET_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rulefit/dataset.h"
#include "rulefit/model.h"
#include "rulefit/pipeline.h"
#include "rulefit/random.h"

namespace rulefit {

// ---------------------------------------------------------------------------
// Importances.

enum class ScopeKind { kGlobal, kPoint, kRegion };

struct ImportanceReport {
  ScopeKind scope = ScopeKind::kGlobal;
  // Parallel to model.rules and model.linear.
  std::vector<double> rule_importance;
  std::vector<double> linear_importance;
  // J_l per predictor.
  std::vector<double> variable_importance;
  // Rows averaged for a region scope.
  size_t num_rows = 0;

  // 100 * v / max over the same family (terms or variables); 0 if all zero.
  std::vector<double> RelativeVariables() const;
  // Rule and linear importances scaled jointly so the largest term is 100.
  std::vector<double> RelativeRules() const;
  std::vector<double> RelativeLinear() const;
};

// I_k = |a_k| sqrt(s_k (1 - s_k)); I_j = |b_j| std(l_j).
ImportanceReport GlobalImportance(const EnsembleModel& model);

// I_k(x) = |a_k| |r_k(x) - s_k|; I_j(x) = |b_j| |l_j(x_j) - mean(l_j)|.
ImportanceReport LocalImportance(const EnsembleModel& model,
                                 std::span<const double> row);

// Plain average of local importances over `rows` of `data`.
ImportanceReport RegionImportance(const EnsembleModel& model, const Dataset& data,
                                  std::span<const size_t> rows);

// Rows whose predictions are among the highest (top) or lowest fraction q:
// the round(q N) extreme rows, at least one. Ties are broken by row index.
std::vector<size_t> PredictionRegion(const EnsembleModel& model, const Dataset& data,
                                     double q, bool top);

// Fills variable_importance: J_l = I_l + sum over rules using l of I_k / m_k.
void AssignVariableImportance(const EnsembleModel& model, ImportanceReport& report);

// ---------------------------------------------------------------------------
// Partial dependence.

struct PdOptions {
  // Caps on evaluation points and integration rows (0 = use every row).
  size_t max_eval_points = 500;
  size_t max_integration_rows = 500;
  // Use all rows for both, ignoring the caps.
  bool exact = false;
  uint64_t seed = 1;
};

// Evaluates partial dependence functions of a fitted model over a dataset.
// Every rule factorizes into a part on the variables of interest and a part
// on the remaining variables; averaging the latter over the integration rows
// gives the exact empirical partial dependence without the double loop.
class PartialDependence {
 public:
  PartialDependence(const EnsembleModel& model, const Dataset& data,
                    const PdOptions& options = {});

  // Evaluation rows and integration rows drawn from `data` (sorted).
  std::span<const size_t> eval_rows() const { return eval_rows_; }
  std::span<const size_t> integration_rows() const { return integration_rows_; }

  // Uncentered F_s at explicit points; each point holds the values of `vars`
  // in order.
  std::vector<double> Evaluate(std::span<const size_t> vars,
                               std::span<const std::vector<double>> points) const;

  // Centered F_s at the evaluation rows' own values of `vars`.
  std::vector<double> AtEvalRows(std::span<const size_t> vars) const;
  // Centered F_{\j} (all variables except j) at the evaluation rows.
  std::vector<double> ComplementAtEvalRows(size_t j) const;
  // Centered F at the evaluation rows.
  std::vector<double> FullAtEvalRows() const;

 private:
  // Uncentered F restricted to the variables flagged in `in_s`, at point
  // values given per variable by `value(var, e)` for e in [0, count).
  std::vector<double> EvaluateMask(
      const std::vector<char>& in_s, size_t count,
      const std::function<double(size_t, size_t)>& value) const;

  const EnsembleModel& model_;
  const Dataset& data_;
  std::vector<size_t> eval_rows_;
  std::vector<size_t> integration_rows_;
  // Per linear term: mean of b_j l_j over integration rows.
  std::vector<double> linear_means_;
};

// Centers a vector to mean zero (in place) and returns it.
std::vector<double> Centered(std::vector<double> v);

// ---------------------------------------------------------------------------
// Interaction statistics.

enum class HKind { kTotal, kPair, kTriple };

struct HRequest {
  HKind kind = HKind::kTotal;
  std::vector<size_t> vars;
};

struct HValue {
  double value = 0.0;
  // Set when the denominator was zero (value reported as 0).
  bool zero_denominator = false;
};

struct HOptions {
  PdOptions pd;
  // Use sum F^2 as the denominator of the pair and triple statistics.
  bool importance_weighted = false;
};

// Square roots of the interaction statistics for one variable (with all
// others), a pair, and a triple.
HValue HTotal(const PartialDependence& pd, size_t j);
HValue HPair(const PartialDependence& pd, size_t j, size_t k,
             bool importance_weighted = false);
HValue HTriple(const PartialDependence& pd, size_t j, size_t k, size_t l,
               bool importance_weighted = false);

std::vector<HValue> ComputeH(const EnsembleModel& model, const Dataset& data,
                             std::span<const HRequest> requests,
                             const HOptions& options);

// All requests of one order over `vars` (every variable for order 1; pairs
// and triples in increasing index order otherwise).
std::vector<HRequest> EnumerateRequests(size_t order, std::span<const size_t> vars);

// ---------------------------------------------------------------------------
// Null calibration.

// The configured pipeline with every tree restricted to two terminal nodes.
EnsembleModel FitAdditiveReference(const Dataset& data, const PipelineConfig& config,
                                   size_t threads = 1);

// Response under the additive null: F_A plus permuted residuals for
// regression, Bernoulli labels with probability clip((1 + F_A) / 2) for
// classification.
std::vector<double> NullResponse(const Dataset& data,
                                 std::span<const double> additive_fit, Rng& rng);

struct NullSummary {
  std::vector<HRequest> requests;
  std::vector<double> mean;
  std::vector<double> std;
  // values[rep][request]
  std::vector<std::vector<double>> values;
  size_t reps = 0;
};

// Refits the full pipeline `reps` times on null responses and evaluates the
// requested statistics on each refit. Replication r uses
// DeriveSeed(seed, r) for the response draw and the pipeline seed.
NullSummary NullDistribution(const Dataset& data, const PipelineConfig& config,
                             const EnsembleModel& additive,
                             std::span<const HRequest> requests,
                             const HOptions& options, size_t reps, uint64_t seed,
                             size_t threads = 1);

struct InteractionEntry {
  HRequest request;
  double h = 0.0;
  bool zero_denominator = false;
  double null_mean = 0.0;
  double null_std = 0.0;
  double excess = 0.0;
  size_t reps = 0;
};

// H - null mean, with the null spread attached. Throws DomainError when the
// null summary was computed for different statistics.
std::vector<InteractionEntry> ExcessStatistics(std::span<const HRequest> requests,
                                               std::span<const HValue> raw,
                                               const NullSummary& null);

std::string RequestLabel(const HRequest& request, std::span<const Column> schema);

}  // namespace rulefit

#endif  // RULEFIT_INTERPRET_H_
