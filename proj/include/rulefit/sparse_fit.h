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

#ifndef RULEFIT_SPARSE_FIT_H_
#define RULEFIT_SPARSE_FIT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rulefit/dataset.h"
#include "rulefit/loss.h"
#include "rulefit/rules.h"

namespace rulefit {

struct FitConfig {
  // Geometric grid from lambda_max down to min_ratio * lambda_max, used when
  // `lambdas` is empty.
  size_t num_lambdas = 100;
  double min_ratio = 1e-3;
  std::vector<double> lambdas;
  // Selection: holdout when holdout_fraction > 0, otherwise k-fold.
  size_t cv_folds = 10;
  double holdout_fraction = 0.0;
  // Coordinate-descent sweeps allowed per lambda.
  size_t max_iter = 1000;
  // Convergence: largest coefficient change, measured in units of the
  // working response's standard deviation per unit column deviation.
  double tol = 1e-4;
  // Majorization rounds per lambda for the Huber and ramp losses.
  size_t max_outer = 10;
  LossSpec loss;
  uint64_t seed = 1;
  // Record the squared-loss objective after every sweep (diagnostics).
  bool record_trace = false;

  void Validate(size_t num_rows) const;
};

// Column-oriented predictor matrix. Binary columns keep the row indices of
// their minority value; continuous columns are dense.
class DesignMatrix {
 public:
  DesignMatrix() = default;

  // Rules become indicator columns, linear terms their normalized values.
  static DesignMatrix FromBasis(const Basis& basis, const Dataset& data);
  // Dense columns; each inner vector is one predictor over all rows.
  static DesignMatrix FromDense(size_t num_rows,
                                const std::vector<std::vector<double>>& columns);

  DesignMatrix Subset(std::span<const size_t> rows) const;

  size_t num_rows() const { return num_rows_; }
  size_t num_predictors() const { return columns_.size(); }
  double Value(size_t k, size_t row) const;

  struct Column {
    bool dense = false;
    std::vector<double> values;
    // Binary: rows whose value differs from `base` (base is 0 or 1).
    std::vector<uint32_t> rows;
    double base = 0.0;
  };
  const Column& column(size_t k) const { return columns_[k]; }

 private:
  size_t num_rows_ = 0;
  std::vector<Column> columns_;
};

struct PathPoint {
  double lambda = 0.0;
  double intercept = 0.0;
  std::vector<double> coefficients;
  // Mean training loss and mean loss + lambda * L1 norm.
  double risk = 0.0;
  double objective = 0.0;
  size_t num_nonzero = 0;
  bool converged = true;
  size_t sweeps = 0;
  // Huber transition point in force at this lambda (0 otherwise).
  double delta = 0.0;
  // Objective after each sweep when FitConfig::record_trace is set.
  std::vector<double> trace;
};

// Smallest lambda with all slopes zero for the objective
// (1/N) sum L(y_i, F_i) + lambda * sum |coefficients|.
double LambdaMax(const DesignMatrix& x, std::span<const double> y,
                 const LossSpec& loss);

std::vector<double> LambdaGrid(double lambda_max, const FitConfig& config);

// Warm-started coordinate-descent solutions along `lambdas` (decreasing).
// The intercept is unpenalized.
std::vector<PathPoint> FitPath(const DesignMatrix& x, std::span<const double> y,
                               const FitConfig& config,
                               std::span<const double> lambdas);

std::vector<double> PredictPath(const DesignMatrix& x, const PathPoint& point);

// Training objective of a point recomputed from scratch.
double Objective(const DesignMatrix& x, std::span<const double> y,
                 const LossSpec& loss, const PathPoint& point);

struct LambdaSelection {
  size_t index = 0;
  std::vector<double> estimated_risk;
};

// Chooses the lambda minimizing held-out risk (k-fold or holdout). Ties go to
// the larger lambda.
LambdaSelection SelectLambda(const DesignMatrix& x, std::span<const double> y,
                             const FitConfig& config,
                             std::span<const double> lambdas,
                             size_t threads = 1);

// Loss settings used to score held-out predictions (Huber delta fixed from
// the intercept-only fit of y).
LossSpec ScoringLoss(std::span<const double> y, const LossSpec& loss);

}  // namespace rulefit

#endif  // RULEFIT_SPARSE_FIT_H_
