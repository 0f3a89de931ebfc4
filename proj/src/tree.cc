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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rulefit/errors.h"

namespace rulefit {
namespace {

// n_l n_r / n * (mean_l - mean_r)^2, the decrease in squared-error impurity.
double Improvement(double n_left, double sum_left, double n_right,
                   double sum_right) {
  const double diff = sum_left / n_left - sum_right / n_right;
  return n_left * n_right / (n_left + n_right) * diff * diff;
}

std::optional<SplitCandidate> NumericSplit(const Dataset& data,
                                           std::span<const size_t> rows,
                                           size_t variable,
                                           std::span<const double> targets,
                                           size_t min_node_rows) {
  const size_t n = rows.size();
  std::vector<std::pair<double, double>> points(n);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    points[i] = {data.value(rows[i], variable), targets[rows[i]]};
    total += points[i].second;
  }
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::optional<SplitCandidate> best;
  double sum_left = 0.0;
  const size_t last = n - min_node_rows;
  for (size_t i = 0; i + 1 < n; ++i) {
    sum_left += points[i].second;
    const size_t n_left = i + 1;
    if (n_left < min_node_rows) continue;
    if (n_left > last) break;
    const double here = points[i].first;
    const double next = points[i + 1].first;
    if (!(here < next)) continue;
    const double z = Improvement(static_cast<double>(n_left), sum_left,
                                 static_cast<double>(n - n_left),
                                 total - sum_left);
    if (!best || z > best->improvement) {
      double threshold = here + 0.5 * (next - here);
      if (!(threshold < next)) threshold = here;
      SplitCandidate c;
      c.split.variable = variable;
      c.split.threshold = threshold;
      c.improvement = z;
      best = std::move(c);
    }
  }
  return best;
}

std::optional<SplitCandidate> CategoricalSplit(const Dataset& data,
                                               std::span<const size_t> rows,
                                               size_t variable,
                                               std::span<const double> targets,
                                               size_t min_node_rows) {
  const Column& col = data.column(variable);
  const size_t num_levels = col.levels.size();
  std::vector<double> count(num_levels, 0.0);
  std::vector<double> sum(num_levels, 0.0);
  for (size_t r : rows) {
    const double v = col.values[r];
    if (v < 0) continue;
    const size_t level = static_cast<size_t>(v);
    count[level] += 1.0;
    sum[level] += targets[r];
  }
  std::vector<size_t> present;
  for (size_t l = 0; l < num_levels; ++l) {
    if (count[l] > 0) present.push_back(l);
  }
  if (present.size() < 2) return std::nullopt;
  std::stable_sort(present.begin(), present.end(), [&](size_t a, size_t b) {
    return sum[a] / count[a] < sum[b] / count[b];
  });

  double total_n = 0.0;
  double total_sum = 0.0;
  for (size_t l : present) {
    total_n += count[l];
    total_sum += sum[l];
  }
  const double min_rows = static_cast<double>(min_node_rows);
  std::optional<SplitCandidate> best;
  double n_left = 0.0;
  double sum_left = 0.0;
  for (size_t cut = 0; cut + 1 < present.size(); ++cut) {
    n_left += count[present[cut]];
    sum_left += sum[present[cut]];
    if (n_left < min_rows || total_n - n_left < min_rows) continue;
    const double z =
        Improvement(n_left, sum_left, total_n - n_left, total_sum - sum_left);
    if (!best || z > best->improvement) {
      SplitCandidate c;
      c.split.variable = variable;
      c.split.categorical = true;
      c.split.left_levels.assign(num_levels, false);
      for (size_t k = 0; k <= cut; ++k) c.split.left_levels[present[k]] = true;
      c.improvement = z;
      best = std::move(c);
    }
  }
  return best;
}

struct Frontier {
  size_t node;
  std::vector<size_t> rows;
  std::optional<SplitCandidate> candidate;
  double score = 0.0;
};

void FindCandidate(const Dataset& data, std::span<const double> targets,
                   const TreeGrowthConfig& config, const TreeNode& node,
                   Frontier& leaf) {
  leaf.candidate.reset();
  leaf.score = 0.0;
  if (leaf.rows.size() < 2 * config.min_node_rows) return;
  for (size_t j = 0; j < data.num_columns(); ++j) {
    std::optional<SplitCandidate> c =
        BestSplit(data, leaf.rows, j, targets, config.min_node_rows);
    if (!c || !(c->improvement > 0.0)) continue;
    const bool reused = std::binary_search(node.path_variables.begin(),
                                           node.path_variables.end(), j);
    const double score = (reused ? config.kappa : 1.0) * c->improvement;
    if (!leaf.candidate || score > leaf.score) {
      leaf.candidate = std::move(c);
      leaf.score = score;
    }
  }
}

double MeanTarget(std::span<const size_t> rows,
                  std::span<const double> targets) {
  double s = 0.0;
  for (size_t r : rows) s += targets[r];
  return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
}

}  // namespace

size_t Tree::num_terminals() const {
  return static_cast<size_t>(std::count_if(
      nodes_.begin(), nodes_.end(),
      [](const TreeNode& n) { return n.is_terminal(); }));
}

size_t Tree::Leaf(std::span<const double> row) const {
  size_t i = 0;
  while (!nodes_[i].is_terminal()) {
    const SplitSpec& s = *nodes_[i].split;
    i = static_cast<size_t>(s.GoesLeft(row[s.variable]) ? nodes_[i].left
                                                        : nodes_[i].right);
  }
  return i;
}

size_t Tree::LeafOfRow(const Dataset& data, size_t row) const {
  size_t i = 0;
  while (!nodes_[i].is_terminal()) {
    const SplitSpec& s = *nodes_[i].split;
    i = static_cast<size_t>(s.GoesLeft(data.value(row, s.variable))
                                ? nodes_[i].left
                                : nodes_[i].right);
  }
  return i;
}

void TreeGrowthConfig::Validate() const {
  if (target_terminals < 2) throw ConfigError("tree needs >= 2 terminals");
  if (min_node_rows < 1) throw ConfigError("min_node_rows must be >= 1");
  if (!(kappa >= 1.0)) throw ConfigError("kappa must be >= 1");
}

size_t SampleTreeSize(double mean_size, Rng& rng) {
  if (!(mean_size >= 2.0)) throw DomainError("mean tree size must be >= 2");
  if (mean_size == 2.0) return 2;
  const double gamma = rng.Exponential(mean_size - 2.0);
  return 2 + static_cast<size_t>(std::floor(gamma));
}

std::optional<SplitCandidate> BestSplit(const Dataset& data,
                                        std::span<const size_t> rows,
                                        size_t variable,
                                        std::span<const double> targets,
                                        size_t min_node_rows) {
  if (rows.size() < 2 * std::max<size_t>(min_node_rows, 1)) return std::nullopt;
  const size_t min_rows = std::max<size_t>(min_node_rows, 1);
  if (data.column(variable).is_categorical()) {
    return CategoricalSplit(data, rows, variable, targets, min_rows);
  }
  return NumericSplit(data, rows, variable, targets, min_rows);
}

Tree GrowTree(const Dataset& data, std::span<const double> targets,
              std::span<const size_t> rows, const TreeGrowthConfig& config) {
  config.Validate();
  if (rows.empty()) throw DomainError("cannot grow a tree on zero rows");

  std::vector<TreeNode> nodes(1);
  nodes[0].value = MeanTarget(rows, targets);
  nodes[0].row_count = rows.size();

  std::vector<Frontier> frontier;
  frontier.push_back({0, std::vector<size_t>(rows.begin(), rows.end()), {}, 0});
  FindCandidate(data, targets, config, nodes[0], frontier.back());

  size_t terminals = 1;
  while (terminals < config.target_terminals) {
    // Highest score wins; on ties the leaf created first.
    std::optional<size_t> pick;
    for (size_t f = 0; f < frontier.size(); ++f) {
      if (!frontier[f].candidate) continue;
      if (!pick || frontier[f].score > frontier[*pick].score ||
          (frontier[f].score == frontier[*pick].score &&
           frontier[f].node < frontier[*pick].node)) {
        pick = f;
      }
    }
    if (!pick) break;

    Frontier leaf = std::move(frontier[*pick]);
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(*pick));
    const SplitSpec& split = leaf.candidate->split;

    std::vector<size_t> left_rows;
    std::vector<size_t> right_rows;
    for (size_t r : leaf.rows) {
      (split.GoesLeft(data.value(r, split.variable)) ? left_rows : right_rows)
          .push_back(r);
    }

    const size_t parent = leaf.node;
    std::vector<size_t> path = nodes[parent].path_variables;
    if (!std::binary_search(path.begin(), path.end(), split.variable)) {
      path.insert(std::upper_bound(path.begin(), path.end(), split.variable),
                  split.variable);
    }
    const size_t left = nodes.size();
    const size_t right = left + 1;
    for (const auto* child_rows : {&left_rows, &right_rows}) {
      TreeNode child;
      child.depth = nodes[parent].depth + 1;
      child.path_variables = path;
      child.row_count = child_rows->size();
      child.value = MeanTarget(*child_rows, targets);
      nodes.push_back(std::move(child));
    }
    nodes[parent].split = split;
    nodes[parent].improvement = leaf.candidate->improvement;
    nodes[parent].left = static_cast<int>(left);
    nodes[parent].right = static_cast<int>(right);
    ++terminals;

    const bool more = terminals < config.target_terminals;
    frontier.push_back({left, std::move(left_rows), {}, 0});
    if (more) FindCandidate(data, targets, config, nodes[left], frontier.back());
    frontier.push_back({right, std::move(right_rows), {}, 0});
    if (more) {
      FindCandidate(data, targets, config, nodes[right], frontier.back());
    }
  }
  return Tree(std::move(nodes));
}

std::vector<std::vector<size_t>> PartitionRows(const Tree& tree,
                                               const Dataset& data,
                                               std::span<const size_t> rows) {
  std::vector<std::vector<size_t>> parts(tree.num_nodes());
  for (size_t r : rows) parts[tree.LeafOfRow(data, r)].push_back(r);
  return parts;
}

}  // namespace rulefit
