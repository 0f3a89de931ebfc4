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

#include "rulefit/rules.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "rulefit/errors.h"
#include "test_util.h"

namespace rulefit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TreeNode Split(size_t var, double thr, int left, int right) {
  TreeNode n;
  SplitSpec s;
  s.variable = var;
  s.threshold = thr;
  n.split = s;
  n.left = left;
  n.right = right;
  return n;
}

TreeNode Leaf(double v) {
  TreeNode n;
  n.value = v;
  return n;
}

// x0 <= .5 ? (x1 <= .3 ? A : B) : (x0 <= .8 ? C : (x2 <= .6 ? D : E))
Tree FiveLeafTree() {
  std::vector<TreeNode> nodes = {
      Split(0, 0.5, 1, 2), Split(1, 0.3, 3, 4), Split(0, 0.8, 5, 6),
      Leaf(1),             Leaf(2),             Leaf(3),
      Split(2, 0.6, 7, 8), Leaf(4),             Leaf(5)};
  return Tree(std::move(nodes));
}

const Rule* FindNode(const std::vector<Rule>& rules, size_t node) {
  for (const Rule& r : rules) {
    if (r.node == node) return &r;
  }
  return nullptr;
}

TEST(ExtractRulesTest, FiveTerminalTreeGivesEightRules) {
  const Tree t = FiveLeafTree();
  ASSERT_EQ(t.num_terminals(), 5u);
  const std::vector<Rule> rules = ExtractRules(t, 3);
  EXPECT_EQ(rules.size(), 2 * (5 - 1));
  for (const Rule& r : rules) EXPECT_EQ(r.tree, 3u);

  // Node 6: 0.8 < x0 (two splits on x0 merge into one interval).
  const Rule* r6 = FindNode(rules, 6);
  ASSERT_NE(r6, nullptr);
  ASSERT_EQ(r6->conjuncts.size(), 1u);
  EXPECT_EQ(r6->conjuncts[0].lo, 0.8);
  EXPECT_EQ(r6->conjuncts[0].hi, kInf);

  // Node 5: 0.5 < x0 <= 0.8.
  const Rule* r5 = FindNode(rules, 5);
  ASSERT_EQ(r5->conjuncts.size(), 1u);
  EXPECT_EQ(r5->conjuncts[0].lo, 0.5);
  EXPECT_EQ(r5->conjuncts[0].hi, 0.8);

  // Node 8: x0 > 0.8 and x2 > 0.6, ordered by variable.
  const Rule* r8 = FindNode(rules, 8);
  ASSERT_EQ(r8->conjuncts.size(), 2u);
  EXPECT_EQ(r8->conjuncts[0].variable, 0u);
  EXPECT_EQ(r8->conjuncts[1].variable, 2u);
  EXPECT_EQ(r8->conjuncts[1].lo, 0.6);

  // Node 3: x0 <= 0.5 and x1 <= 0.3.
  const Rule* r3 = FindNode(rules, 3);
  ASSERT_EQ(r3->conjuncts.size(), 2u);
  EXPECT_EQ(r3->conjuncts[0].hi, 0.5);
  EXPECT_EQ(r3->conjuncts[1].hi, 0.3);
  EXPECT_TRUE(r3->Evaluate(std::vector<double>{0.5, 0.3, 9}));
  EXPECT_FALSE(r3->Evaluate(std::vector<double>{0.5, 0.31, 9}));
}

TEST(ExtractRulesTest, SingleLeafGivesNoRules) {
  const Tree t({Leaf(1.0)});
  EXPECT_TRUE(ExtractRules(t).empty());
}

TEST(ExtractRulesTest, SiblingRulesPartitionParent) {
  const Tree t = FiveLeafTree();
  const std::vector<Rule> rules = ExtractRules(t);
  Rng rng(5);
  for (int rep = 0; rep < 500; ++rep) {
    const std::vector<double> x = {rng.Uniform(), rng.Uniform(), rng.Uniform()};
    for (size_t n = 0; n < t.num_nodes(); ++n) {
      const TreeNode& node = t.node(n);
      if (node.is_terminal()) continue;
      const bool parent = n == 0 || FindNode(rules, n)->Evaluate(x);
      const int l = FindNode(rules, node.left)->Evaluate(x);
      const int r = FindNode(rules, node.right)->Evaluate(x);
      EXPECT_EQ(l + r, parent ? 1 : 0);
    }
  }
}

TEST(AddConditionTest, CategoricalIntersections) {
  SplitSpec a;
  a.variable = 1;
  a.categorical = true;
  a.left_levels = {true, true, false, false};
  SplitSpec b = a;
  b.left_levels = {false, true, true, false};

  std::vector<Conjunct> c;
  AddCondition(c, a, true);   // in {0,1}
  AddCondition(c, b, false);  // not in {1,2}
  ASSERT_EQ(c.size(), 1u);
  EXPECT_FALSE(c[0].negated);
  EXPECT_TRUE(c[0].Holds(0));
  EXPECT_FALSE(c[0].Holds(1));
  EXPECT_FALSE(c[0].Holds(2));

  std::vector<Conjunct> d;
  AddCondition(d, a, false);  // not in {0,1}
  AddCondition(d, b, false);  // not in {1,2}
  ASSERT_EQ(d.size(), 1u);
  EXPECT_TRUE(d[0].negated);
  EXPECT_TRUE(d[0].Holds(3));
  EXPECT_TRUE(d[0].Holds(kUnseenLevel));
  for (double v : {0.0, 1.0, 2.0}) EXPECT_FALSE(d[0].Holds(v));

  std::vector<Conjunct> e;
  AddCondition(e, a, false);  // not in {0,1}
  AddCondition(e, b, true);   // in {1,2}
  EXPECT_FALSE(e[0].negated);
  EXPECT_TRUE(e[0].Holds(2));
  EXPECT_FALSE(e[0].Holds(1));
  EXPECT_FALSE(e[0].Holds(kUnseenLevel));
}

TEST(ComputeSupportTest, FractionOfRows) {
  const Dataset d({testing::NumericColumn("x", {1, 2, 3, 4, 5, 6, 7, 8})},
                  std::vector<double>(8, 0.0), Task::kRegression);
  Rule r = testing::MakeRule({testing::Interval(0, 2, 5)}, d);
  EXPECT_DOUBLE_EQ(r.support, 3.0 / 8.0);
  EXPECT_DOUBLE_EQ(r.scale, std::sqrt(3.0 / 8.0 * 5.0 / 8.0));
  Rule empty;
  EXPECT_THROW(empty.Evaluate(std::vector<double>{1.0}), DomainError);
}

TEST(BuildBasisTest, DeduplicatesAndDropsDegenerateRules) {
  const Dataset d = testing::UniformData(200, 3, 9, [](auto, Rng&) { return 0.0; });
  TreeEnsemble e;
  e.trees = {FiveLeafTree(), FiveLeafTree(),
             Tree({Split(0, 5.0, 1, 2), Leaf(0), Leaf(0)})};
  const WinsorLimits lim = ComputeWinsorLimits(d, 0.0);
  const Basis b = BuildBasis(e, d, lim);
  EXPECT_EQ(b.num_extracted_rules, 8u + 8u + 2u);
  // Duplicates of the first tree vanish; x0 <= 5 fires everywhere and
  // x0 > 5 never does.
  EXPECT_EQ(b.rules.size(), 8u);
  for (const Rule& r : b.rules) {
    EXPECT_GT(r.support, 0.0);
    EXPECT_LT(r.support, 1.0);
    EXPECT_EQ(r.tree, 0u);
  }
  ASSERT_EQ(b.linear.size(), 3u);
  for (const LinearTerm& t : b.linear) {
    EXPECT_NEAR(t.std * t.normalization, kLinearTargetStd, 1e-12);
  }
}

TEST(BuildBasisTest, LinearTermsUseWinsorizedValues) {
  std::vector<double> v;
  for (int i = 0; i < 100; ++i) v.push_back(i == 99 ? 1000.0 : i);
  const Dataset d({testing::NumericColumn("x", v)}, std::vector<double>(100, 0.0),
                  Task::kRegression);
  const WinsorLimits lim = ComputeWinsorLimits(d, 0.05);
  BasisOptions opts;
  opts.include_rules = false;
  const Basis b = BuildBasis(TreeEnsemble{}, d, lim, opts);
  ASSERT_EQ(b.linear.size(), 1u);
  const double top = b.Value(0, d, 99) / b.linear[0].normalization;
  EXPECT_DOUBLE_EQ(top, lim.upper[0]);
  EXPECT_LT(lim.upper[0], 1000.0);
}

TEST(BuildBasisTest, ConstantColumnHasNoLinearTerm) {
  const Dataset d({testing::NumericColumn("c", std::vector<double>(10, 3.0))},
                  std::vector<double>(10, 0.0), Task::kRegression);
  BasisOptions opts;
  opts.include_rules = false;
  EXPECT_TRUE(BuildBasis(TreeEnsemble{}, d, ComputeWinsorLimits(d, 0.0), opts)
                  .linear.empty());
  EXPECT_THROW(BuildBasis(TreeEnsemble{}, d, ComputeWinsorLimits(d, 0.0)), DomainError);
}

}  // namespace
}  // namespace rulefit
