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

#include "rulefit/tree.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rulefit/errors.h"
#include "rulefit/random.h"
#include "rulefit/rules.h"
#include "test_util.h"

namespace rulefit {
namespace {

using testing::AllRows;

double Sse(std::span<const size_t> rows, std::span<const double> t) {
  if (rows.empty()) return 0.0;
  double m = 0;
  for (size_t r : rows) m += t[r];
  m /= static_cast<double>(rows.size());
  double s = 0;
  for (size_t r : rows) s += (t[r] - m) * (t[r] - m);
  return s;
}

// Exhaustive search over every numeric threshold.
std::pair<double, double> BruteForceNumericSplit(const Dataset& d, size_t var,
                                                 std::span<const size_t> rows,
                                                 std::span<const double> t,
                                                 size_t min_rows) {
  double best_gain = -1;
  double best_threshold = 0;
  std::vector<double> values;
  for (size_t r : rows) values.push_back(d.value(r, var));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (size_t k = 0; k + 1 < values.size(); ++k) {
    const double thr = (values[k] + values[k + 1]) / 2;
    std::vector<size_t> l, r;
    for (size_t i : rows) (d.value(i, var) <= thr ? l : r).push_back(i);
    if (l.size() < min_rows || r.size() < min_rows) continue;
    const double gain = Sse(rows, t) - Sse(l, t) - Sse(r, t);
    if (gain > best_gain + 1e-12) {
      best_gain = gain;
      best_threshold = thr;
    }
  }
  return {best_gain, best_threshold};
}

TEST(BestSplitTest, MatchesExhaustiveSearch) {
  Rng rng(21);
  for (int rep = 0; rep < 30; ++rep) {
    const Dataset d = testing::UniformData(60, 1, rng.NextU64(), [](auto x, Rng& r) {
      return (x[0] > 0.4 ? 2.0 : 0.0) + r.Normal();
    });
    const std::vector<size_t> rows = AllRows(60);
    const auto c = BestSplit(d, rows, 0, d.response(), 5);
    const auto [gain, thr] = BruteForceNumericSplit(d, 0, rows, d.response(), 5);
    ASSERT_TRUE(c.has_value());
    EXPECT_NEAR(c->improvement, gain, 1e-9);
    EXPECT_NEAR(c->split.threshold, thr, 1e-12);
  }
}

TEST(BestSplitTest, ConstantColumnHasNoSplit) {
  Column c = testing::NumericColumn("x", std::vector<double>(20, 1.0));
  std::vector<double> y(20);
  std::iota(y.begin(), y.end(), 0.0);
  const Dataset d({c}, y, Task::kRegression);
  EXPECT_FALSE(BestSplit(d, AllRows(20), 0, d.response(), 1).has_value());
}

TEST(BestSplitTest, RespectsMinNodeRows) {
  Column c = testing::NumericColumn("x", {1, 2, 3, 4, 5, 6});
  const Dataset d({c}, {100, 0, 0, 0, 0, 0}, Task::kRegression);
  const auto s = BestSplit(d, AllRows(6), 0, d.response(), 2);
  ASSERT_TRUE(s.has_value());
  EXPECT_DOUBLE_EQ(s->split.threshold, 2.5);
  EXPECT_FALSE(BestSplit(d, AllRows(6), 0, d.response(), 4).has_value());
}

TEST(BestSplitTest, CategoricalOrdersLevelsByMean) {
  Column c;
  c.name = "c";
  c.kind = ColumnKind::kCategorical;
  c.levels = {"a", "b", "c", "d"};
  std::vector<double> y;
  const double means[] = {5, 0, 5.5, 0.5};
  for (int rep = 0; rep < 5; ++rep) {
    for (int l = 0; l < 4; ++l) {
      c.values.push_back(l);
      y.push_back(means[l]);
    }
  }
  const Dataset d({c}, y, Task::kRegression);
  const auto s = BestSplit(d, AllRows(y.size()), 0, d.response(), 1);
  ASSERT_TRUE(s.has_value());
  ASSERT_TRUE(s->split.categorical);
  // {b, d} versus {a, c}.
  EXPECT_EQ(s->split.left_levels[0], s->split.left_levels[2]);
  EXPECT_EQ(s->split.left_levels[1], s->split.left_levels[3]);
  EXPECT_NE(s->split.left_levels[0], s->split.left_levels[1]);
  EXPECT_FALSE(s->split.GoesLeft(kUnseenLevel));
}

TEST(GrowTreeTest, StumpOnStep) {
  const Dataset d = testing::UniformData(200, 3, 4, [](auto x, Rng&) {
    return x[1] > 0.5 ? 1.0 : -1.0;
  });
  TreeGrowthConfig cfg;
  cfg.target_terminals = 2;
  const Tree t = GrowTree(d, d.response(), AllRows(200), cfg);
  ASSERT_EQ(t.num_terminals(), 2u);
  EXPECT_EQ(t.node(0).split->variable, 1u);
  for (size_t i = 0; i < 200; ++i) EXPECT_DOUBLE_EQ(t.PredictRow(d, i), d.response()[i]);
}

TEST(GrowTreeTest, LeafValueIsMeanOfLeafTargets) {
  const Dataset d = testing::UniformData(300, 4, 6, [](auto x, Rng& r) {
    return x[0] * 3 + std::sin(6 * x[1]) + r.Normal() * 0.1;
  });
  TreeGrowthConfig cfg;
  cfg.target_terminals = 6;
  cfg.min_node_rows = 5;
  const std::vector<size_t> rows = AllRows(300);
  const Tree t = GrowTree(d, d.response(), rows, cfg);
  EXPECT_EQ(t.num_terminals(), 6u);
  const auto parts = PartitionRows(t, d, rows);
  for (size_t node = 0; node < t.num_nodes(); ++node) {
    if (!t.node(node).is_terminal()) continue;
    double m = 0;
    for (size_t r : parts[node]) m += d.response()[r];
    m /= static_cast<double>(parts[node].size());
    EXPECT_NEAR(t.node(node).value, m, 1e-12);
    EXPECT_GE(parts[node].size(), 5u);
  }
}

TEST(GrowTreeTest, StopsWhenNothingSplittable) {
  Column c = testing::NumericColumn("x", std::vector<double>(30, 2.0));
  std::vector<double> y(30);
  std::iota(y.begin(), y.end(), 0.0);
  const Dataset d({c}, y, Task::kRegression);
  TreeGrowthConfig cfg;
  cfg.target_terminals = 8;
  const Tree t = GrowTree(d, d.response(), AllRows(30), cfg);
  EXPECT_EQ(t.num_terminals(), 1u);
}

TEST(GrowTreeTest, PathVariablesTrackAncestors) {
  const Dataset d = testing::UniformData(400, 3, 7, [](auto x, Rng& r) {
    return (x[0] > 0.5) * (x[2] > 0.5) * 3.0 + r.Normal() * 0.01;
  });
  TreeGrowthConfig cfg;
  cfg.target_terminals = 3;
  const Tree t = GrowTree(d, d.response(), AllRows(400), cfg);
  for (size_t n = 0; n < t.num_nodes(); ++n) {
    const TreeNode& node = t.node(n);
    if (node.is_terminal()) continue;
    for (int child : {node.left, node.right}) {
      std::vector<size_t> expect = node.path_variables;
      if (!std::binary_search(expect.begin(), expect.end(), node.split->variable)) {
        expect.push_back(node.split->variable);
        std::sort(expect.begin(), expect.end());
      }
      EXPECT_EQ(t.node(child).path_variables, expect);
    }
  }
}

TEST(GrowTreeTest, KappaFavoursRepeatedVariable) {
  // Target depends additively on x1 (strong) and x2 (weaker); a large kappa
  // keeps the second split on x1.
  const Dataset d = testing::UniformData(1000, 2, 8, [](auto x, Rng&) {
    return 2.0 * x[0] + (x[1] > 0.5 ? 0.6 : 0.0);
  });
  TreeGrowthConfig cfg;
  cfg.target_terminals = 3;
  cfg.kappa = 1.0;
  const Tree plain = GrowTree(d, d.response(), AllRows(1000), cfg);
  cfg.kappa = 50.0;
  const Tree biased = GrowTree(d, d.response(), AllRows(1000), cfg);
  auto second_var = [](const Tree& t) {
    for (size_t n = 1; n < t.num_nodes(); ++n) {
      if (!t.node(n).is_terminal()) return t.node(n).split->variable;
    }
    return std::numeric_limits<size_t>::max();
  };
  EXPECT_EQ(biased.node(0).split->variable, 0u);
  EXPECT_EQ(second_var(biased), 0u);
  EXPECT_EQ(plain.node(0).split->variable, 0u);
  EXPECT_EQ(second_var(plain), 1u);
}

TEST(GrowTreeTest, PredictionEqualsRuleDecomposition) {
  const Dataset d = testing::UniformData(250, 3, 12, [](auto x, Rng& r) {
    return x[0] + x[1] * x[2] + r.Normal() * 0.1;
  });
  TreeGrowthConfig cfg;
  cfg.target_terminals = 8;
  cfg.min_node_rows = 3;
  const Tree t = GrowTree(d, d.response(), AllRows(250), cfg);
  const std::vector<Rule> rules = ExtractRules(t);
  EXPECT_EQ(rules.size(), t.num_nodes() - 1);
  for (size_t i = 0; i < 250; ++i) {
    const std::vector<double> row = d.Row(i);
    double f = 0.0;
    size_t active = 0;
    for (const Rule& r : rules) {
      if (t.node(r.node).is_terminal() && r.Evaluate(row)) {
        f += t.node(r.node).value;
        ++active;
      }
    }
    EXPECT_EQ(active, 1u);
    EXPECT_NEAR(f, t.Predict(row), 1e-12);
  }
}

TEST(SampleTreeSizeTest, MeanAndFloor) {
  Rng rng(3);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const size_t t = SampleTreeSize(4.0, rng);
    ASSERT_GE(t, 2u);
    sum += static_cast<double>(t);
  }
  // E[2 + floor(G)] with G exponential of mean 2 is 2 + 1 / (e^{1/2} - 1).
  EXPECT_NEAR(sum / n, 2.0 + 1.0 / (std::exp(0.5) - 1.0), 0.02);
  EXPECT_EQ(SampleTreeSize(2.0, rng), 2u);
  EXPECT_THROW(SampleTreeSize(1.5, rng), DomainError);
}

}  // namespace
}  // namespace rulefit
