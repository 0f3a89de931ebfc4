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

#include "rulefit/loss.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "rulefit/errors.h"
#include "rulefit/random.h"

namespace rulefit {
namespace {

LossSpec Spec(LossKind kind, double delta = 0.0) {
  LossSpec s;
  s.kind = kind;
  s.delta = delta;
  return s;
}

TEST(EvalLossTest, Squared) {
  EXPECT_DOUBLE_EQ(EvalLoss(Spec(LossKind::kSquared), 3, 1), 4.0);
}

TEST(EvalLossTest, HuberBranchesAgreeAtDelta) {
  const LossSpec h = Spec(LossKind::kHuber, 2.0);
  EXPECT_DOUBLE_EQ(EvalLoss(h, 1, 0), 0.5);
  EXPECT_DOUBLE_EQ(EvalLoss(h, 3, 0), 4.0);
  EXPECT_DOUBLE_EQ(EvalLoss(h, 2, 0), 2.0);
  // Continuity on both sides of the transition.
  EXPECT_NEAR(EvalLoss(h, 2 - 1e-9, 0), EvalLoss(h, 2 + 1e-9, 0), 1e-8);
  EXPECT_NEAR(EvalLoss(h, -2 - 1e-9, 0), EvalLoss(h, -2 + 1e-9, 0), 1e-8);
}

TEST(EvalLossTest, RampClips) {
  const LossSpec r = Spec(LossKind::kRamp);
  EXPECT_DOUBLE_EQ(EvalLoss(r, 1, 2), 0.0);
  EXPECT_DOUBLE_EQ(EvalLoss(r, -1, 2), 4.0);
  EXPECT_DOUBLE_EQ(EvalLoss(r, 1, 0), 1.0);
}

TEST(NegativeGradientTest, ClosedForms) {
  EXPECT_DOUBLE_EQ(NegativeGradient(Spec(LossKind::kSquared), 3, 1), 4.0);
  EXPECT_DOUBLE_EQ(NegativeGradient(Spec(LossKind::kHuber, 1.0), 5, 0), 1.0);
  EXPECT_DOUBLE_EQ(NegativeGradient(Spec(LossKind::kHuber, 1.0), -5, 0), -1.0);
  EXPECT_DOUBLE_EQ(NegativeGradient(Spec(LossKind::kHuber, 1.0), 0.5, 0), 0.5);
}

TEST(NegativeGradientTest, RampSubgradientChoice) {
  const LossSpec r = Spec(LossKind::kRamp);
  EXPECT_DOUBLE_EQ(NegativeGradient(r, 1, 0.5), 1.0);
  // Clipped on y's side: nothing to gain.
  EXPECT_DOUBLE_EQ(NegativeGradient(r, 1, 3), 0.0);
  EXPECT_DOUBLE_EQ(NegativeGradient(r, -1, -3), 0.0);
  // Clipped on the wrong side: interior gradient.
  EXPECT_DOUBLE_EQ(NegativeGradient(r, 1, -3), 4.0);
  EXPECT_DOUBLE_EQ(NegativeGradient(r, -1, 3), -4.0);
}

TEST(NegativeGradientTest, FiniteDifferenceAtSmoothPoints) {
  Rng rng(5);
  const double h = 1e-5;
  for (int rep = 0; rep < 300; ++rep) {
    const double y = rng.Normal() * 3;
    const double f = rng.Normal() * 3;
    for (LossKind kind : {LossKind::kSquared, LossKind::kHuber}) {
      const LossSpec s = Spec(kind, 1.3);
      if (kind == LossKind::kHuber && std::abs(std::abs(y - f) - 1.3) < 1e-3) continue;
      const double fd = (EvalLoss(s, y, f - h) - EvalLoss(s, y, f + h)) / (2 * h);
      EXPECT_NEAR(NegativeGradient(s, y, f), fd, 1e-6);
    }
    const double label = y > 0 ? 1.0 : -1.0;
    const double g = std::clamp(f, -0.99, 0.99);
    const LossSpec r = Spec(LossKind::kRamp);
    const double fd = (EvalLoss(r, label, g - h) - EvalLoss(r, label, g + h)) / (2 * h);
    EXPECT_NEAR(NegativeGradient(r, label, g), fd, 1e-6);
  }
}

TEST(HuberDeltaTest, Cases) {
  EXPECT_DOUBLE_EQ(HuberDelta(std::vector<double>{2, 2, -2}, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(HuberDelta(std::vector<double>{-3, 1, 2}, 1.0), 3.0);
  std::vector<double> r(100);
  for (int i = 0; i < 100; ++i) r[i] = i + 1;
  EXPECT_NEAR(HuberDelta(r, 0.9), Quantile(r, 0.9), 1e-12);
  EXPECT_THROW(HuberDelta(std::vector<double>{}, 0.9), DomainError);
}

TEST(ConstantMinimizerTest, SquaredIsMean) {
  const std::vector<double> y = {1, 2, 3, 10};
  EXPECT_NEAR(ConstantMinimizer(Spec(LossKind::kSquared), y), 4.0, 1e-12);
}

TEST(ConstantMinimizerTest, RampIsClippedMean) {
  const std::vector<double> y = {1, 1, 1, -1};
  EXPECT_NEAR(ConstantMinimizer(Spec(LossKind::kRamp), y), 0.5, 1e-12);
  const std::vector<double> all = {1, 1};
  EXPECT_NEAR(ConstantMinimizer(Spec(LossKind::kRamp), all), 1.0, 1e-12);
}

// Golden-section search as an independent oracle for 1-D convex minimization.
double GoldenSection(const std::function<double(double)>& f, double a, double b) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  for (int i = 0; i < 300; ++i) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return (a + b) / 2;
}

TEST(LineSearchTest, HuberMatchesGoldenSection) {
  Rng rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> y(40);
    std::vector<double> off(40);
    for (size_t i = 0; i < y.size(); ++i) {
      y[i] = rng.Normal() * 2 + (i % 7 == 0 ? 15 : 0);
      off[i] = rng.Normal();
    }
    const LossSpec s = Spec(LossKind::kHuber, 0.8);
    auto total = [&](double c) {
      double t = 0;
      for (size_t i = 0; i < y.size(); ++i) t += EvalLoss(s, y[i], off[i] + c);
      return t;
    };
    const double ours = LineSearch(s, y, off);
    const double oracle = GoldenSection(total, -30, 30);
    EXPECT_NEAR(total(ours), total(oracle), 1e-7);
  }
}

TEST(LineSearchTest, RampMatchesGoldenSection) {
  Rng rng(10);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> y(30);
    std::vector<double> off(30);
    for (size_t i = 0; i < y.size(); ++i) {
      y[i] = rng.Uniform() < 0.6 ? 1.0 : -1.0;
      off[i] = rng.Normal();
    }
    const LossSpec s = Spec(LossKind::kRamp);
    auto total = [&](double c) {
      double t = 0;
      for (size_t i = 0; i < y.size(); ++i) t += EvalLoss(s, y[i], off[i] + c);
      return t;
    };
    const double ours = LineSearch(s, y, off);
    // The ramp objective is not convex; scan then refine.
    double best = -5;
    for (double c = -5; c <= 5; c += 1e-3) {
      if (total(c) < total(best)) best = c;
    }
    const double oracle = GoldenSection(total, best - 2e-3, best + 2e-3);
    EXPECT_LE(total(ours), total(oracle) + 1e-9);
  }
}

TEST(LossSpecTest, TaskCompatibility) {
  EXPECT_THROW(Spec(LossKind::kRamp).Validate(Task::kRegression), ConfigError);
  EXPECT_THROW(Spec(LossKind::kSquared).Validate(Task::kBinaryClassification),
               ConfigError);
  LossSpec bad = Spec(LossKind::kHuber);
  bad.alpha = 0.0;
  EXPECT_THROW(bad.Validate(Task::kRegression), ConfigError);
}

TEST(LossPropertyTest, NonNegativeAndZeroAtMatch) {
  Rng rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    const double y = rng.Normal();
    const double f = rng.Normal();
    for (LossKind kind : {LossKind::kSquared, LossKind::kHuber}) {
      EXPECT_GE(EvalLoss(Spec(kind, 0.7), y, f), 0.0);
      EXPECT_DOUBLE_EQ(EvalLoss(Spec(kind, 0.7), y, y), 0.0);
    }
  }
}

}  // namespace
}  // namespace rulefit
