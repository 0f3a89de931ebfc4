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

#include "rulefit/ensemble.h"

#include <algorithm>
#include <cmath>

#include "rulefit/errors.h"
#include "rulefit/random.h"

namespace rulefit {

size_t DefaultEta(size_t num_rows) {
  const double n = static_cast<double>(num_rows);
  const double eta = std::floor(std::min(n / 2.0, 100.0 + 6.0 * std::sqrt(n)));
  return std::max<size_t>(1, static_cast<size_t>(eta));
}

size_t EnsembleConfig::ResolvedEta(size_t num_rows) const {
  return eta == 0 ? DefaultEta(num_rows) : eta;
}

void EnsembleConfig::Validate(const Dataset& data) const {
  if (data.num_rows() == 0) throw ConfigError("empty training data");
  if (num_trees < 1) throw ConfigError("need at least one tree");
  if (!(nu >= 0.0 && nu <= 1.0)) throw ConfigError("nu must lie in [0, 1]");
  const size_t resolved = ResolvedEta(data.num_rows());
  if (resolved < 1 || resolved > data.num_rows()) {
    throw ConfigError("subsample size eta must lie in [1, N]");
  }
  if (!(mean_tree_size >= 2.0)) throw ConfigError("mean tree size must be >= 2");
  if (!(kappa >= 1.0)) throw ConfigError("kappa must be >= 1");
  if (min_node_rows < 1) throw ConfigError("min_node_rows must be >= 1");
  loss.Validate(data.task());
}

TreeEnsemble GenerateEnsemble(const Dataset& data,
                              const EnsembleConfig& config) {
  config.Validate(data);
  const size_t n = data.num_rows();
  const size_t eta = config.ResolvedEta(n);
  const std::span<const double> y = data.response();
  Rng rng(config.seed);

  TreeEnsemble ensemble;
  ensemble.f0 = ConstantMinimizer(config.loss, y);
  std::vector<double> memory(n, ensemble.f0);
  std::vector<double> targets(n, 0.0);
  std::vector<double> residuals(n);

  LossSpec loss = config.loss;
  TreeGrowthConfig growth;
  growth.min_node_rows = config.min_node_rows;
  growth.kappa = config.kappa;

  for (size_t m = 0; m < config.num_trees; ++m) {
    if (loss.kind == LossKind::kHuber) {
      for (size_t i = 0; i < n; ++i) residuals[i] = y[i] - memory[i];
      loss.delta = HuberDelta(residuals, loss.alpha);
    }
    std::vector<size_t> rows = rng.SampleWithoutReplacement(n, eta);
    const size_t requested = SampleTreeSize(config.mean_tree_size, rng);
    growth.target_terminals = requested;

    for (size_t r : rows) targets[r] = NegativeGradient(loss, y[r], memory[r]);
    Tree tree = GrowTree(data, targets, rows, growth);

    // Replace terminal means by the loss-specific line search in each leaf.
    const std::vector<std::vector<size_t>> parts =
        PartitionRows(tree, data, rows);
    std::vector<double> leaf_y;
    std::vector<double> leaf_f;
    for (size_t node = 0; node < tree.num_nodes(); ++node) {
      if (!tree.node(node).is_terminal() || parts[node].empty()) continue;
      leaf_y.clear();
      leaf_f.clear();
      for (size_t r : parts[node]) {
        leaf_y.push_back(y[r]);
        leaf_f.push_back(memory[r]);
      }
      tree.mutable_node(node).value = LineSearch(loss, leaf_y, leaf_f);
    }

    if (config.nu != 0.0) {
      for (size_t i = 0; i < n; ++i) {
        memory[i] += config.nu * tree.PredictRow(data, i);
      }
    }
    ensemble.sizes.push_back(tree.num_terminals());
    ensemble.requested_sizes.push_back(requested);
    ensemble.deltas.push_back(loss.kind == LossKind::kHuber ? loss.delta : 0.0);
    ensemble.subsamples.push_back(std::move(rows));
    ensemble.trees.push_back(std::move(tree));
  }
  ensemble.final_memory = std::move(memory);
  return ensemble;
}

double MemoryPredict(const TreeEnsemble& ensemble, double nu,
                     std::span<const double> row, size_t m) {
  double f = ensemble.f0;
  const size_t limit = std::min(m, ensemble.trees.size());
  for (size_t k = 0; k < limit; ++k) f += nu * ensemble.trees[k].Predict(row);
  return f;
}

}  // namespace rulefit
