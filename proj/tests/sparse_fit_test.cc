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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rulefit/errors.h"
#include "test_util.h"

namespace rulefit {
namespace {

using testing::ProximalLasso;

struct Instance {
  DesignMatrix x;
  std::vector<double> y;
};

Instance RandomInstance(uint64_t seed, size_t n, size_t p) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(p, std::vector<double>(n));
  for (auto& c : cols) {
    for (double& v : c) v = rng.Normal();
  }
  // Correlate a pair of columns.
  if (p > 1) {
    for (size_t i = 0; i < n; ++i) cols[1][i] = 0.7 * cols[0][i] + 0.3 * cols[1][i];
  }
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) {
    y[i] = 1.5 + 2.0 * cols[0][i] - cols[p - 1][i] + rng.Normal();
  }
  return {DesignMatrix::FromDense(n, cols), y};
}

FitConfig Tight() {
  FitConfig cfg;
  cfg.tol = 1e-12;
  cfg.max_iter = 100000;
  return cfg;
}

// Gradient of (1/N) sum (y - f)^2 with respect to coefficient k.
double Gradient(const DesignMatrix& x, std::span<const double> y,
                std::span<const double> f, size_t k) {
  double g = 0.0;
  for (size_t i = 0; i < y.size(); ++i) g += -2.0 * x.Value(k, i) * (y[i] - f[i]);
  return g / static_cast<double>(y.size());
}

TEST(LambdaGridTest, GeometricFromMax) {
  FitConfig cfg;
  cfg.num_lambdas = 5;
  cfg.min_ratio = 1e-4;
  const auto g = LambdaGrid(2.0, cfg);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g[0], 2.0);
  EXPECT_NEAR(g[4], 2e-4, 1e-16);
  for (size_t i = 1; i < 5; ++i) EXPECT_NEAR(g[i] / g[i - 1], 0.1, 1e-12);
  cfg.lambdas = {3, 1};
  EXPECT_EQ(LambdaGrid(2.0, cfg), cfg.lambdas);
}

TEST(FitPathTest, OrthonormalDesignIsSoftThreshold) {
  // Mean-zero orthogonal columns with (1/N) sum x^2 = 1.
  const size_t n = 8;
  std::vector<std::vector<double>> cols = {
      {1, -1, 1, -1, 1, -1, 1, -1},
      {1, 1, -1, -1, 1, 1, -1, -1},
      {1, 1, 1, 1, -1, -1, -1, -1}};
  const std::vector<double> y = {3.0, 1.0, 2.5, -0.5, 0.2, 0.1, 4.0, -2.0};
  const DesignMatrix x = DesignMatrix::FromDense(n, cols);
  double ymean = 0;
  for (double v : y) ymean += v;
  ymean /= n;
  const std::vector<double> lambdas = {2.0, 1.0, 0.5, 0.1, 0.0};
  const auto path = FitPath(x, y, Tight(), lambdas);
  for (size_t l = 0; l < lambdas.size(); ++l) {
    for (size_t k = 0; k < 3; ++k) {
      double rho = 0;
      for (size_t i = 0; i < n; ++i) rho += cols[k][i] * (y[i] - ymean);
      rho /= n;
      const double want =
          std::copysign(std::max(0.0, std::abs(rho) - lambdas[l] / 2.0), rho);
      EXPECT_NEAR(path[l].coefficients[k], want, 1e-10) << l << " " << k;
    }
    EXPECT_NEAR(path[l].intercept, ymean, 1e-10);
  }
}

TEST(FitPathTest, AgreesWithProximalGradient) {
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    const Instance inst = RandomInstance(seed, 40, 6);
    const double lmax = LambdaMax(inst.x, inst.y, LossSpec{});
    const std::vector<double> lambdas = {lmax * 0.5, lmax * 0.1, lmax * 0.01};
    const auto path = FitPath(inst.x, inst.y, Tight(), lambdas);
    for (size_t l = 0; l < lambdas.size(); ++l) {
      double c0 = 0.0;
      const auto want = ProximalLasso(inst.x, inst.y, lambdas[l], &c0);
      for (size_t k = 0; k < want.size(); ++k) {
        EXPECT_NEAR(path[l].coefficients[k], want[k], 1e-7);
      }
      EXPECT_NEAR(path[l].intercept, c0, 1e-7);
    }
  }
}

TEST(FitPathTest, LambdaMaxIsSmallestAllZeroPenalty) {
  const Instance inst = RandomInstance(9, 50, 5);
  const double lmax = LambdaMax(inst.x, inst.y, LossSpec{});
  const std::vector<double> lambdas = {lmax * 1.0000001, lmax * 0.98};
  const auto path = FitPath(inst.x, inst.y, Tight(), lambdas);
  EXPECT_EQ(path[0].num_nonzero, 0u);
  EXPECT_GT(path[1].num_nonzero, 0u);
}

// KKT conditions of the squared-loss lasso at every path point.
TEST(FitPathTest, KktOnRandomInstances) {
  for (uint64_t seed = 100; seed < 120; ++seed) {
    Rng rng(seed);
    const size_t n = 20 + rng.UniformInt(30);
    const size_t p = 3 + rng.UniformInt(12);
    const Instance inst = RandomInstance(seed, n, p);
    FitConfig cfg = Tight();
    cfg.num_lambdas = 25;
    const auto grid = LambdaGrid(LambdaMax(inst.x, inst.y, cfg.loss), cfg);
    const auto path = FitPath(inst.x, inst.y, cfg, grid);
    for (const PathPoint& pt : path) {
      ASSERT_TRUE(pt.converged);
      const auto f = PredictPath(inst.x, pt);
      double rsum = 0;
      for (size_t i = 0; i < n; ++i) rsum += inst.y[i] - f[i];
      EXPECT_NEAR(rsum / n, 0.0, 1e-9);
      for (size_t k = 0; k < p; ++k) {
        const double g = Gradient(inst.x, inst.y, f, k);
        if (pt.coefficients[k] != 0.0) {
          EXPECT_NEAR(g, -pt.lambda * std::copysign(1.0, pt.coefficients[k]), 1e-8)
              << "seed " << seed << " k " << k;
        } else {
          EXPECT_LE(std::abs(g), pt.lambda + 1e-8) << "seed " << seed << " k " << k;
        }
      }
      EXPECT_NEAR(pt.objective, Objective(inst.x, inst.y, cfg.loss, pt), 1e-10);
    }
  }
}

TEST(FitPathTest, ObjectiveDecreasesMonotonicallyWithinSolve) {
  const Instance inst = RandomInstance(3, 60, 8);
  FitConfig cfg = Tight();
  cfg.record_trace = true;
  const std::vector<double> lambdas = {0.05};
  const auto path = FitPath(inst.x, inst.y, cfg, lambdas);
  const auto& t = path[0].trace;
  ASSERT_GE(t.size(), 2u);
  for (size_t s = 1; s < t.size(); ++s) EXPECT_LE(t[s], t[s - 1] + 1e-12);
}

// Replacing a rule by its complement leaves every fitted value unchanged.
TEST(FitPathTest, ComplementRuleEquivalence) {
  const Dataset d = testing::UniformData(150, 2, 4, [](auto x, Rng& r) {
    return (x[0] <= 0.3 ? 2.0 : 0.0) + x[1] + 0.3 * r.Normal();
  });
  Basis a;
  Basis b;
  a.rules.push_back(testing::MakeRule({testing::Interval(0, -INFINITY, 0.3)}, d));
  b.rules.push_back(testing::MakeRule({testing::Interval(0, 0.3, INFINITY)}, d));
  const Rule shared =
      testing::MakeRule({testing::Interval(1, 0.5, INFINITY), testing::Interval(0, 0.1, 0.9)}, d);
  a.rules.push_back(shared);
  b.rules.push_back(shared);
  const DesignMatrix xa = DesignMatrix::FromBasis(a, d);
  const DesignMatrix xb = DesignMatrix::FromBasis(b, d);
  const std::vector<double> lambdas = {0.5, 0.1, 0.01, 0.0};
  const auto pa = FitPath(xa, d.response(), Tight(), lambdas);
  const auto pb = FitPath(xb, d.response(), Tight(), lambdas);
  for (size_t l = 0; l < lambdas.size(); ++l) {
    const auto fa = PredictPath(xa, pa[l]);
    const auto fb = PredictPath(xb, pb[l]);
    for (size_t i = 0; i < fa.size(); ++i) EXPECT_NEAR(fa[i], fb[i], 1e-8);
    EXPECT_NEAR(pa[l].coefficients[0], -pb[l].coefficients[0], 1e-8);
  }
}

TEST(FitPathTest, SparseAndDenseColumnsAgree) {
  const Dataset d = testing::UniformData(120, 2, 5, [](auto x, Rng& r) {
    return (x[0] > 0.6 ? 1.0 : 0.0) + 0.5 * r.Normal();
  });
  Basis basis;
  basis.rules.push_back(testing::MakeRule({testing::Interval(0, 0.6, INFINITY)}, d));
  basis.rules.push_back(testing::MakeRule({testing::Interval(1, -INFINITY, 0.8)}, d));
  const DesignMatrix sparse = DesignMatrix::FromBasis(basis, d);
  std::vector<std::vector<double>> cols(2, std::vector<double>(120));
  for (size_t k = 0; k < 2; ++k) {
    for (size_t i = 0; i < 120; ++i) cols[k][i] = basis.Value(k, d, i);
  }
  const DesignMatrix dense = DesignMatrix::FromDense(120, cols);
  for (size_t k = 0; k < 2; ++k) {
    for (size_t i = 0; i < 120; ++i) EXPECT_EQ(sparse.Value(k, i), dense.Value(k, i));
  }
  const std::vector<double> lambdas = {0.1, 0.01};
  const auto ps = FitPath(sparse, d.response(), Tight(), lambdas);
  const auto pd = FitPath(dense, d.response(), Tight(), lambdas);
  for (size_t l = 0; l < 2; ++l) {
    for (size_t k = 0; k < 2; ++k) {
      EXPECT_NEAR(ps[l].coefficients[k], pd[l].coefficients[k], 1e-9);
    }
    EXPECT_NEAR(ps[l].intercept, pd[l].intercept, 1e-9);
  }
}

TEST(FitPathTest, HuberRobustToOutlier) {
  Instance inst = RandomInstance(8, 80, 3);
  inst.y[0] += 1000.0;
  FitConfig sq = Tight();
  FitConfig hu = Tight();
  hu.loss.kind = LossKind::kHuber;
  const std::vector<double> lambdas = {0.01};
  const auto ps = FitPath(inst.x, inst.y, sq, lambdas);
  const auto ph = FitPath(inst.x, inst.y, hu, lambdas);
  // True slope on column 0 is 2 (partly shared with the correlated column 1).
  EXPECT_GT(ph[0].delta, 0.0);
  EXPECT_LT(std::abs(ph[0].intercept - 1.5), std::abs(ps[0].intercept - 1.5));
}

TEST(SelectLambdaTest, DeterministicAndPrefersInteriorLambda) {
  const Instance inst = RandomInstance(12, 200, 10);
  FitConfig cfg;
  cfg.num_lambdas = 30;
  const auto grid = LambdaGrid(LambdaMax(inst.x, inst.y, cfg.loss), cfg);
  const LambdaSelection a = SelectLambda(inst.x, inst.y, cfg, grid);
  const LambdaSelection b = SelectLambda(inst.x, inst.y, cfg, grid, 3);
  EXPECT_EQ(a.index, b.index);
  EXPECT_EQ(a.estimated_risk, b.estimated_risk);
  EXPECT_GT(a.index, 0u);
  for (double r : a.estimated_risk) EXPECT_GE(r, a.estimated_risk[a.index]);
  cfg.holdout_fraction = 0.25;
  const LambdaSelection h = SelectLambda(inst.x, inst.y, cfg, grid);
  EXPECT_GT(h.index, 0u);
}

TEST(FitConfigTest, Validation) {
  FitConfig cfg;
  cfg.cv_folds = 1;
  EXPECT_THROW(cfg.Validate(100), ConfigError);
  cfg = {};
  cfg.cv_folds = 200;
  EXPECT_THROW(cfg.Validate(100), ConfigError);
  cfg = {};
  cfg.holdout_fraction = 1.0;
  EXPECT_THROW(cfg.Validate(100), ConfigError);
  cfg = {};
  cfg.min_ratio = 1.0;
  EXPECT_THROW(cfg.Validate(100), ConfigError);
  cfg = {};
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.Validate(100), ConfigError);
  EXPECT_NO_THROW(FitConfig{}.Validate(100));
}

}  // namespace
}  // namespace rulefit
