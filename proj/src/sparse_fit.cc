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

#include "rulefit/sparse_fit.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rulefit/errors.h"
#include "rulefit/parallel.h"
#include "rulefit/random.h"

namespace rulefit {
namespace {

double SoftThreshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

// Intercept-only fit and, for Huber, a transition point consistent with it.
struct InitialFit {
  double intercept = 0.0;
  LossSpec loss;
};

InitialFit FitIntercept(std::span<const double> y, const LossSpec& loss) {
  InitialFit fit;
  fit.loss = loss;
  if (loss.kind != LossKind::kHuber) {
    fit.intercept = ConstantMinimizer(loss, y);
    return fit;
  }
  std::vector<double> r(y.begin(), y.end());
  const double median = Quantile(y, 0.5);
  for (double& v : r) v -= median;
  fit.loss.delta = HuberDelta(r, loss.alpha);
  for (int round = 0; round < 3; ++round) {
    fit.intercept = LineSearch(fit.loss, y, {});
    for (size_t i = 0; i < y.size(); ++i) r[i] = y[i] - fit.intercept;
    const double delta = HuberDelta(r, loss.alpha);
    if (delta == fit.loss.delta) break;
    fit.loss.delta = delta;
  }
  fit.intercept = LineSearch(fit.loss, y, {});
  return fit;
}

double GuardDelta(double delta, std::span<const double> y) {
  if (delta > 0.0) return delta;
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  return std::max(1e-12, 1e-9 * scale);
}

// Weighted least-squares lasso by cyclic coordinate descent:
//   (1/2N) sum w_i (u_i - c0 - sum_k c_k z_ik)^2 + penalty * sum |c_k|
// Binary columns are handled through their minority-row indicator with the
// coefficient sign flipped when the stored base value is 1.
class CoordinateDescent {
 public:
  explicit CoordinateDescent(const DesignMatrix& x)
      : x_(x),
        n_(x.num_rows()),
        p_(x.num_predictors()),
        weights_(n_, 1.0),
        response_(n_, 0.0),
        mean_(p_, 0.0),
        var_(p_, 0.0),
        weight_in_(p_, 0.0),
        coef_(p_, 0.0),
        resid_(n_, 0.0) {}

  void SetWeights(std::span<const double> w) {
    std::copy(w.begin(), w.end(), weights_.begin());
    total_weight_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (size_t k = 0; k < p_; ++k) {
      const DesignMatrix::Column& col = x_.column(k);
      if (col.dense) {
        double m = 0.0;
        for (size_t i = 0; i < n_; ++i) m += weights_[i] * col.values[i];
        m /= total_weight_;
        double v = 0.0;
        for (size_t i = 0; i < n_; ++i) {
          const double d = col.values[i] - m;
          v += weights_[i] * d * d;
        }
        mean_[k] = m;
        var_[k] = v * inv_n;
      } else {
        double ws = 0.0;
        for (uint32_t i : col.rows) ws += weights_[i];
        const double m = ws / total_weight_;
        weight_in_[k] = ws;
        mean_[k] = m;
        var_[k] = ws * (1.0 - m) * inv_n;
      }
    }
  }

  void SetResponse(std::span<const double> u) {
    std::copy(u.begin(), u.end(), response_.begin());
    double mean = 0.0;
    for (size_t i = 0; i < n_; ++i) mean += weights_[i] * response_[i];
    mean /= total_weight_;
    double ss = 0.0;
    for (size_t i = 0; i < n_; ++i) {
      ss += weights_[i] * (response_[i] - mean) * (response_[i] - mean);
    }
    response_sd_ = std::sqrt(ss / static_cast<double>(n_));
    if (!(response_sd_ > 0.0)) response_sd_ = 1.0;
    RebuildResiduals();
  }

  // External (column-value) coefficients.
  void SetCoefficients(std::span<const double> a) {
    for (size_t k = 0; k < p_; ++k) coef_[k] = a[k] * Sign(k);
  }
  std::vector<double> Coefficients() const {
    std::vector<double> a(p_);
    for (size_t k = 0; k < p_; ++k) a[k] = coef_[k] * Sign(k);
    return a;
  }

  // Intercept for the external column values.
  double Intercept() const {
    double mean_u = 0.0;
    for (size_t i = 0; i < n_; ++i) mean_u += weights_[i] * response_[i];
    mean_u /= total_weight_;
    double c0 = mean_u;
    for (size_t k = 0; k < p_; ++k) {
      if (coef_[k] == 0.0) continue;
      c0 -= coef_[k] * mean_[k];
      if (!x_.column(k).dense) c0 -= coef_[k] * Sign(k) * x_.column(k).base;
    }
    return c0;
  }

  // Fitted values F_i = u_i - residual_i.
  std::vector<double> Fitted() const {
    std::vector<double> f(n_);
    for (size_t i = 0; i < n_; ++i) f[i] = response_[i] - (resid_[i] + shift_);
    return f;
  }

  double Surrogate(double penalty) const {
    double ss = 0.0;
    for (size_t i = 0; i < n_; ++i) {
      const double r = resid_[i] + shift_;
      ss += weights_[i] * r * r;
    }
    double l1 = 0.0;
    for (double c : coef_) l1 += std::abs(c);
    return ss / (2.0 * static_cast<double>(n_)) + penalty * l1;
  }

  struct Result {
    bool converged = false;
    size_t sweeps = 0;
  };

  Result Solve(double penalty, size_t max_sweeps, double tol,
               std::vector<double>* trace) {
    const double threshold = tol * response_sd_;
    std::vector<size_t> all(p_);
    std::iota(all.begin(), all.end(), size_t{0});
    std::vector<size_t> active;
    Result result;
    while (result.sweeps < max_sweeps) {
      const double full = Sweep(all, penalty);
      ++result.sweeps;
      if (trace) trace->push_back(Surrogate(penalty));
      if (full < threshold) {
        result.converged = true;
        break;
      }
      active.clear();
      for (size_t k = 0; k < p_; ++k) {
        if (coef_[k] != 0.0) active.push_back(k);
      }
      while (result.sweeps < max_sweeps) {
        const double change = Sweep(active, penalty);
        ++result.sweeps;
        if (trace) trace->push_back(Surrogate(penalty));
        if (change < threshold) break;
      }
    }
    return result;
  }

 private:
  double Sign(size_t k) const {
    const DesignMatrix::Column& col = x_.column(k);
    return (!col.dense && col.base == 1.0) ? -1.0 : 1.0;
  }

  void RebuildResiduals() {
    for (size_t i = 0; i < n_; ++i) resid_[i] = response_[i];
    for (size_t k = 0; k < p_; ++k) {
      if (coef_[k] == 0.0) continue;
      const DesignMatrix::Column& col = x_.column(k);
      if (col.dense) {
        for (size_t i = 0; i < n_; ++i) resid_[i] -= coef_[k] * col.values[i];
      } else {
        for (uint32_t i : col.rows) resid_[i] -= coef_[k];
      }
    }
    shift_ = 0.0;
    Recenter();
  }

  void Recenter() {
    double m = 0.0;
    for (size_t i = 0; i < n_; ++i) m += weights_[i] * (resid_[i] + shift_);
    m /= total_weight_;
    for (size_t i = 0; i < n_; ++i) resid_[i] += shift_ - m;
    shift_ = 0.0;
  }

  double Sweep(std::span<const size_t> coords, double penalty) {
    const double inv_n = 1.0 / static_cast<double>(n_);
    double max_change = 0.0;
    for (size_t k : coords) {
      const double v = var_[k];
      if (!(v > 1e-14)) continue;
      const DesignMatrix::Column& col = x_.column(k);
      double g = 0.0;
      if (col.dense) {
        const double m = mean_[k];
        for (size_t i = 0; i < n_; ++i) {
          g += weights_[i] * (col.values[i] - m) * (resid_[i] + shift_);
        }
      } else {
        for (uint32_t i : col.rows) g += weights_[i] * resid_[i];
        g += shift_ * weight_in_[k];
      }
      g *= inv_n;
      const double updated = SoftThreshold(v * coef_[k] + g, penalty) / v;
      const double delta = updated - coef_[k];
      if (delta == 0.0) continue;
      coef_[k] = updated;
      if (col.dense) {
        const double m = mean_[k];
        for (size_t i = 0; i < n_; ++i) resid_[i] -= delta * (col.values[i] - m);
      } else {
        for (uint32_t i : col.rows) resid_[i] -= delta;
        shift_ += delta * mean_[k];
      }
      max_change = std::max(max_change, std::abs(delta) * std::sqrt(v));
    }
    Recenter();
    return max_change;
  }

  const DesignMatrix& x_;
  size_t n_;
  size_t p_;
  std::vector<double> weights_;
  std::vector<double> response_;
  std::vector<double> mean_;
  std::vector<double> var_;
  std::vector<double> weight_in_;
  std::vector<double> coef_;
  std::vector<double> resid_;
  double shift_ = 0.0;
  double total_weight_ = 0.0;
  double response_sd_ = 1.0;
};

double MeanLoss(const LossSpec& loss, std::span<const double> y,
                std::span<const double> f) {
  double s = 0.0;
  for (size_t i = 0; i < y.size(); ++i) s += EvalLoss(loss, y[i], f[i]);
  return y.empty() ? 0.0 : s / static_cast<double>(y.size());
}

}  // namespace

void FitConfig::Validate(size_t num_rows) const {
  if (lambdas.empty()) {
    if (num_lambdas < 1) throw ConfigError("lambda grid needs >= 1 point");
    if (!(min_ratio > 0.0 && min_ratio < 1.0)) {
      throw ConfigError("lambda min_ratio must lie in (0, 1)");
    }
  }
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (holdout_fraction > 0.0) {
    if (holdout_fraction >= 1.0) {
      throw ConfigError("holdout fraction must lie in (0, 1)");
    }
  } else {
    if (cv_folds < 2) throw ConfigError("cross-validation needs >= 2 folds");
    if (cv_folds > num_rows) {
      throw ConfigError("cross-validation folds exceed the number of rows");
    }
  }
}

DesignMatrix DesignMatrix::FromBasis(const Basis& basis, const Dataset& data) {
  DesignMatrix x;
  const size_t n = data.num_rows();
  x.num_rows_ = n;
  x.columns_.reserve(basis.size());
  std::vector<uint32_t> ones;
  std::vector<uint32_t> zeros;
  for (const Rule& rule : basis.rules) {
    ones.clear();
    zeros.clear();
    for (size_t i = 0; i < n; ++i) {
      (rule.EvaluateRow(data, i) ? ones : zeros)
          .push_back(static_cast<uint32_t>(i));
    }
    Column col;
    if (ones.size() <= zeros.size()) {
      col.rows = ones;
      col.base = 0.0;
    } else {
      col.rows = zeros;
      col.base = 1.0;
    }
    x.columns_.push_back(std::move(col));
  }
  for (const LinearTerm& t : basis.linear) {
    Column col;
    col.dense = true;
    col.values.resize(n);
    for (size_t i = 0; i < n; ++i) {
      col.values[i] = t.normalization *
                      Winsorize(data.value(i, t.variable), t.lower, t.upper);
    }
    x.columns_.push_back(std::move(col));
  }
  return x;
}

DesignMatrix DesignMatrix::FromDense(
    size_t num_rows, const std::vector<std::vector<double>>& columns) {
  DesignMatrix x;
  x.num_rows_ = num_rows;
  for (const std::vector<double>& values : columns) {
    if (values.size() != num_rows) throw DomainError("column length mismatch");
    Column col;
    col.dense = true;
    col.values = values;
    x.columns_.push_back(std::move(col));
  }
  return x;
}

DesignMatrix DesignMatrix::Subset(std::span<const size_t> rows) const {
  DesignMatrix x;
  x.num_rows_ = rows.size();
  std::vector<int64_t> position(num_rows_, -1);
  for (size_t i = 0; i < rows.size(); ++i) {
    position[rows[i]] = static_cast<int64_t>(i);
  }
  x.columns_.reserve(columns_.size());
  for (const Column& col : columns_) {
    Column sub;
    sub.dense = col.dense;
    sub.base = col.base;
    if (col.dense) {
      sub.values.reserve(rows.size());
      for (size_t r : rows) sub.values.push_back(col.values[r]);
    } else {
      for (uint32_t r : col.rows) {
        if (position[r] >= 0) sub.rows.push_back(static_cast<uint32_t>(position[r]));
      }
      std::sort(sub.rows.begin(), sub.rows.end());
    }
    x.columns_.push_back(std::move(sub));
  }
  return x;
}

double DesignMatrix::Value(size_t k, size_t row) const {
  const Column& col = columns_[k];
  if (col.dense) return col.values[row];
  const bool listed = std::binary_search(col.rows.begin(), col.rows.end(),
                                         static_cast<uint32_t>(row));
  return listed ? 1.0 - col.base : col.base;
}

double LambdaMax(const DesignMatrix& x, std::span<const double> y,
                 const LossSpec& loss) {
  const size_t n = x.num_rows();
  if (n == 0) throw DomainError("lambda_max of an empty design");
  const InitialFit init = FitIntercept(y, loss);
  LossSpec spec = init.loss;
  if (spec.kind == LossKind::kHuber) spec.delta = GuardDelta(spec.delta, y);
  std::vector<double> g(n);
  double g_sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    g[i] = NegativeGradient(spec, y[i], init.intercept);
    g_sum += g[i];
  }
  double best = 0.0;
  for (size_t k = 0; k < x.num_predictors(); ++k) {
    const DesignMatrix::Column& col = x.column(k);
    double dot = 0.0;
    double mean = 0.0;
    if (col.dense) {
      for (size_t i = 0; i < n; ++i) mean += col.values[i];
      mean /= static_cast<double>(n);
      for (size_t i = 0; i < n; ++i) dot += g[i] * (col.values[i] - mean);
    } else {
      // Indicator of listed rows; the sign of the base does not matter here.
      double in = 0.0;
      for (uint32_t i : col.rows) in += g[i];
      mean = static_cast<double>(col.rows.size()) / static_cast<double>(n);
      dot = in - mean * g_sum;
    }
    best = std::max(best, std::abs(dot) / static_cast<double>(n));
  }
  return best;
}

std::vector<double> LambdaGrid(double lambda_max, const FitConfig& config) {
  if (!config.lambdas.empty()) return config.lambdas;
  std::vector<double> grid(config.num_lambdas);
  if (config.num_lambdas == 1) {
    grid[0] = lambda_max;
    return grid;
  }
  const double step =
      std::log(config.min_ratio) / static_cast<double>(config.num_lambdas - 1);
  for (size_t i = 0; i < config.num_lambdas; ++i) {
    grid[i] = lambda_max * std::exp(step * static_cast<double>(i));
  }
  return grid;
}

std::vector<PathPoint> FitPath(const DesignMatrix& x, std::span<const double> y,
                               const FitConfig& config,
                               std::span<const double> lambdas) {
  const size_t n = x.num_rows();
  if (y.size() != n) throw DomainError("response length mismatch");
  if (n == 0) throw DomainError("cannot fit an empty design");
  const LossKind kind = config.loss.kind;
  const InitialFit init = FitIntercept(y, config.loss);
  LossSpec loss = init.loss;

  CoordinateDescent cd(x);
  std::vector<double> ones(n, 1.0);
  cd.SetWeights(ones);
  cd.SetResponse(y);
  std::vector<double> fitted(n, init.intercept);
  std::vector<double> weights(n, 1.0);
  std::vector<double> working(y.begin(), y.end());

  std::vector<PathPoint> path;
  path.reserve(lambdas.size());
  for (size_t step = 0; step < lambdas.size(); ++step) {
    const double lambda = lambdas[step];
    PathPoint point;
    point.lambda = lambda;
    point.converged = true;

    if (kind == LossKind::kSquared) {
      const auto r = cd.Solve(lambda / 2.0, config.max_iter, config.tol,
                              config.record_trace ? &point.trace : nullptr);
      point.converged = r.converged;
      point.sweeps = r.sweeps;
    } else if (kind == LossKind::kHuber) {
      if (step > 0) {
        std::vector<double> resid(n);
        for (size_t i = 0; i < n; ++i) resid[i] = y[i] - fitted[i];
        loss.delta = HuberDelta(resid, loss.alpha);
      }
      loss.delta = GuardDelta(loss.delta, y);
      for (size_t outer = 0; outer < config.max_outer; ++outer) {
        for (size_t i = 0; i < n; ++i) {
          const double a = std::abs(y[i] - fitted[i]);
          weights[i] = a <= loss.delta ? 1.0 : loss.delta / a;
        }
        const std::vector<double> before = cd.Coefficients();
        cd.SetWeights(weights);
        cd.SetResponse(y);
        const auto r = cd.Solve(lambda, config.max_iter, config.tol, nullptr);
        point.converged = r.converged;
        point.sweeps += r.sweeps;
        fitted = cd.Fitted();
        const std::vector<double> after = cd.Coefficients();
        double change = 0.0;
        for (size_t k = 0; k < after.size(); ++k) {
          change = std::max(change, std::abs(after[k] - before[k]));
        }
        if (change < config.tol) break;
      }
    } else {
      for (size_t outer = 0; outer < config.max_outer; ++outer) {
        bool changed = outer == 0;
        for (size_t i = 0; i < n; ++i) {
          const double u = y[i] * fitted[i] >= 1.0 ? fitted[i] : y[i];
          if (u != working[i]) changed = true;
          working[i] = u;
        }
        if (!changed) break;
        cd.SetResponse(working);
        const auto r = cd.Solve(lambda / 2.0, config.max_iter, config.tol, nullptr);
        point.converged = r.converged;
        point.sweeps += r.sweeps;
        fitted = cd.Fitted();
      }
    }

    if (kind == LossKind::kSquared) fitted = cd.Fitted();
    point.coefficients = cd.Coefficients();
    point.intercept = cd.Intercept();
    point.delta = kind == LossKind::kHuber ? loss.delta : 0.0;
    point.num_nonzero = static_cast<size_t>(
        std::count_if(point.coefficients.begin(), point.coefficients.end(),
                      [](double c) { return c != 0.0; }));
    point.risk = MeanLoss(loss, y, fitted);
    double l1 = 0.0;
    for (double c : point.coefficients) l1 += std::abs(c);
    point.objective = point.risk + lambda * l1;
    path.push_back(std::move(point));
  }
  return path;
}

std::vector<double> PredictPath(const DesignMatrix& x, const PathPoint& point) {
  std::vector<double> f(x.num_rows(), point.intercept);
  for (size_t k = 0; k < x.num_predictors(); ++k) {
    const double a = point.coefficients[k];
    if (a == 0.0) continue;
    const DesignMatrix::Column& col = x.column(k);
    if (col.dense) {
      for (size_t i = 0; i < f.size(); ++i) f[i] += a * col.values[i];
    } else {
      if (col.base == 1.0) {
        for (double& v : f) v += a;
        for (uint32_t i : col.rows) f[i] -= a;
      } else {
        for (uint32_t i : col.rows) f[i] += a;
      }
    }
  }
  return f;
}

double Objective(const DesignMatrix& x, std::span<const double> y,
                 const LossSpec& loss, const PathPoint& point) {
  LossSpec spec = loss;
  if (spec.kind == LossKind::kHuber) spec.delta = point.delta;
  const std::vector<double> f = PredictPath(x, point);
  double l1 = 0.0;
  for (double c : point.coefficients) l1 += std::abs(c);
  return MeanLoss(spec, y, f) + point.lambda * l1;
}

LossSpec ScoringLoss(std::span<const double> y, const LossSpec& loss) {
  LossSpec spec = FitIntercept(y, loss).loss;
  if (spec.kind == LossKind::kHuber) spec.delta = GuardDelta(spec.delta, y);
  return spec;
}

LambdaSelection SelectLambda(const DesignMatrix& x, std::span<const double> y,
                             const FitConfig& config,
                             std::span<const double> lambdas, size_t threads) {
  if (lambdas.empty()) throw DomainError("empty lambda path");
  config.Validate(x.num_rows());
  LambdaSelection selection;
  if (lambdas.size() == 1) {
    selection.estimated_risk.assign(1, 0.0);
    return selection;
  }
  const size_t n = x.num_rows();
  const LossSpec scoring = ScoringLoss(y, config.loss);
  Rng rng(DeriveSeed(config.seed, 0x5e1ec7));
  const std::vector<size_t> order = rng.Permutation(n);

  // Each fold is a (train, test) partition of the rows.
  std::vector<std::vector<size_t>> test_sets;
  if (config.holdout_fraction > 0.0) {
    const size_t held = std::max<size_t>(
        1, static_cast<size_t>(std::floor(config.holdout_fraction * n)));
    if (held >= n) throw ConfigError("holdout leaves no training rows");
    test_sets.emplace_back(order.begin(), order.begin() + held);
  } else {
    test_sets.resize(config.cv_folds);
    for (size_t i = 0; i < n; ++i) test_sets[i % config.cv_folds].push_back(order[i]);
  }

  std::vector<std::vector<double>> fold_loss(test_sets.size());
  ParallelFor(test_sets.size(), threads, [&](size_t f) {
    std::vector<size_t> test = test_sets[f];
    std::sort(test.begin(), test.end());
    std::vector<char> held(n, 0);
    for (size_t r : test) held[r] = 1;
    std::vector<size_t> train;
    train.reserve(n - test.size());
    for (size_t r = 0; r < n; ++r) {
      if (!held[r]) train.push_back(r);
    }
    const DesignMatrix x_train = x.Subset(train);
    const DesignMatrix x_test = x.Subset(test);
    std::vector<double> y_train(train.size());
    for (size_t i = 0; i < train.size(); ++i) y_train[i] = y[train[i]];
    const std::vector<PathPoint> path = FitPath(x_train, y_train, config, lambdas);
    std::vector<double> sums(lambdas.size(), 0.0);
    for (size_t l = 0; l < path.size(); ++l) {
      const std::vector<double> f_test = PredictPath(x_test, path[l]);
      for (size_t i = 0; i < test.size(); ++i) {
        sums[l] += EvalLoss(scoring, y[test[i]], f_test[i]);
      }
    }
    fold_loss[f] = std::move(sums);
  });

  size_t scored = 0;
  for (const auto& t : test_sets) scored += t.size();
  selection.estimated_risk.assign(lambdas.size(), 0.0);
  for (const auto& sums : fold_loss) {
    for (size_t l = 0; l < sums.size(); ++l) selection.estimated_risk[l] += sums[l];
  }
  for (double& r : selection.estimated_risk) r /= static_cast<double>(scored);
  for (size_t l = 1; l < lambdas.size(); ++l) {
    if (selection.estimated_risk[l] < selection.estimated_risk[selection.index]) {
      selection.index = l;
    }
  }
  return selection;
}

}  // namespace rulefit
