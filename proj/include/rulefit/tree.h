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

#ifndef RULEFIT_TREE_H_
#define RULEFIT_TREE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rulefit/dataset.h"
#include "rulefit/random.h"

namespace rulefit {

// Binary split. Numeric: left iff x <= threshold. Categorical: left iff the
// level is in left_levels; unseen levels go right.
struct SplitSpec {
  size_t variable = 0;
  bool categorical = false;
  double threshold = 0.0;
  std::vector<bool> left_levels;

  bool GoesLeft(double x) const {
    if (!categorical) return x <= threshold;
    if (x < 0) return false;
    const size_t level = static_cast<size_t>(x);
    return level < left_levels.size() && left_levels[level];
  }
};

struct TreeNode {
  std::optional<SplitSpec> split;
  int left = -1;
  int right = -1;
  double improvement = 0.0;
  double value = 0.0;
  int depth = 0;
  // Variables split on by the ancestors of this node, sorted.
  std::vector<size_t> path_variables;
  size_t row_count = 0;

  bool is_terminal() const { return !split.has_value(); }
};

// Nodes in creation order; node 0 is the root. Children always have larger
// indices than their parent.
class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  std::span<const TreeNode> nodes() const { return nodes_; }
  const TreeNode& node(size_t i) const { return nodes_[i]; }
  TreeNode& mutable_node(size_t i) { return nodes_[i]; }
  size_t num_nodes() const { return nodes_.size(); }
  size_t num_terminals() const;

  // Index of the terminal node reached by a row.
  size_t Leaf(std::span<const double> row) const;
  size_t LeafOfRow(const Dataset& data, size_t row) const;

  double Predict(std::span<const double> row) const {
    return nodes_[Leaf(row)].value;
  }
  double PredictRow(const Dataset& data, size_t row) const {
    return nodes_[LeafOfRow(data, row)].value;
  }

 private:
  std::vector<TreeNode> nodes_;
};

struct TreeGrowthConfig {
  size_t target_terminals = 2;
  size_t min_node_rows = 10;
  // Multiplier on the improvement of variables already split on along the
  // path to the node being split.
  double kappa = 1.0;

  void Validate() const;
};

// t = 2 + floor(g) with g exponential of mean (mean_size - 2); exactly 2 when
// mean_size == 2.
size_t SampleTreeSize(double mean_size, Rng& rng);

struct SplitCandidate {
  SplitSpec split;
  double improvement = 0.0;
};

// Least-squares split of `rows` on one variable. `targets` is indexed by
// dataset row. Both children must hold at least min_node_rows rows. Ties go
// to the smaller threshold (numeric) or the first cut in the level ordering.
std::optional<SplitCandidate> BestSplit(const Dataset& data,
                                        std::span<const size_t> rows,
                                        size_t variable,
                                        std::span<const double> targets,
                                        size_t min_node_rows);

// Best-first growth: the frontier leaf with the largest kappa-weighted
// improvement is split next until target_terminals leaves exist or nothing
// is splittable. Terminal values are the mean target of the node's rows.
Tree GrowTree(const Dataset& data, std::span<const double> targets,
              std::span<const size_t> rows, const TreeGrowthConfig& config);

// Training rows (from `rows`) that reach each terminal node, keyed by node.
std::vector<std::vector<size_t>> PartitionRows(const Tree& tree,
                                               const Dataset& data,
                                               std::span<const size_t> rows);

}  // namespace rulefit

#endif  // RULEFIT_TREE_H_
