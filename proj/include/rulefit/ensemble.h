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

#ifndef RULEFIT_ENSEMBLE_H_
#define RULEFIT_ENSEMBLE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rulefit/dataset.h"
#include "rulefit/loss.h"
#include "rulefit/tree.h"

namespace rulefit {

struct EnsembleConfig {
  size_t num_trees = 333;
  // Shrinkage applied to each tree when updating the memory function.
  double nu = 0.01;
  // Rows per subsample; 0 selects DefaultEta(N).
  size_t eta = 0;
  // Mean number of terminal nodes.
  double mean_tree_size = 4.0;
  double kappa = 1.0;
  size_t min_node_rows = 10;
  LossSpec loss;
  uint64_t seed = 1;

  // eta resolved against the sample size.
  size_t ResolvedEta(size_t num_rows) const;
  void Validate(const Dataset& data) const;
};

// floor(min(N / 2, 100 + 6 sqrt(N))), at least 1.
size_t DefaultEta(size_t num_rows);

struct TreeEnsemble {
  double f0 = 0.0;
  std::vector<Tree> trees;
  // Terminal-node count of each grown tree.
  std::vector<size_t> sizes;
  // Sizes requested from the exponential draw (>= sizes when a tree ran out
  // of splittable rows).
  std::vector<size_t> requested_sizes;
  // Huber transition point used for each tree (0 for other losses).
  std::vector<double> deltas;
  // Subsample drawn for each tree.
  std::vector<std::vector<size_t>> subsamples;
  // Memory F_M on the training rows after the last tree.
  std::vector<double> final_memory;
};

// Sequential generation of regression trees on subsamples of the data, each
// fit to the negative gradient of the loss at the current memory function,
// with terminal values replaced by per-leaf line searches.
TreeEnsemble GenerateEnsemble(const Dataset& data, const EnsembleConfig& config);

// f0 + nu * sum of the first m trees at a row.
double MemoryPredict(const TreeEnsemble& ensemble, double nu,
                     std::span<const double> row, size_t m);

}  // namespace rulefit

#endif  // RULEFIT_ENSEMBLE_H_
