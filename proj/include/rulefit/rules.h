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

#ifndef RULEFIT_RULES_H_
#define RULEFIT_RULES_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rulefit/dataset.h"
#include "rulefit/ensemble.h"
#include "rulefit/tree.h"

namespace rulefit {

// One factor of a rule. Numeric: lo < x <= hi (infinite ends allowed).
// Categorical: x in levels, or x not in levels when negated. A level unseen
// in training is a member of no enumerated set.
struct Conjunct {
  size_t variable = 0;
  bool categorical = false;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::vector<bool> levels;
  bool negated = false;

  bool Holds(double x) const {
    if (!categorical) return lo < x && x <= hi;
    const bool member = x >= 0 && static_cast<size_t>(x) < levels.size() &&
                        levels[static_cast<size_t>(x)];
    return member != negated;
  }
};

struct Rule {
  // Sorted by variable, at most one per variable.
  std::vector<Conjunct> conjuncts;
  double support = 0.0;
  // sqrt(support (1 - support)).
  double scale = 0.0;
  size_t tree = 0;
  size_t node = 0;

  size_t num_variables() const { return conjuncts.size(); }
  bool Uses(size_t variable) const;

  // Throws DomainError for a rule without conjuncts.
  bool Evaluate(std::span<const double> row) const;
  bool EvaluateRow(const Dataset& data, size_t row) const;

  // Canonical text of the condition set; equal keys mean identical rules.
  std::string Key() const;
  std::string ToString(std::span<const Column> columns) const;
};

// Adds the condition of a tree edge to a conjunct list, intersecting with an
// existing condition on the same variable.
void AddCondition(std::vector<Conjunct>& conjuncts, const SplitSpec& split,
                  bool left);

// One rule per non-root node: the conjunction of edge conditions from the
// root. A tree with t terminals yields 2 (t - 1) rules.
std::vector<Rule> ExtractRules(const Tree& tree, size_t tree_index = 0);

// Fraction of rows of `data` on which the rule fires; also stores support and
// scale in the rule.
double ComputeSupport(Rule& rule, const Dataset& data);

// Winsorized linear predictor for a numeric variable.
struct LinearTerm {
  size_t variable = 0;
  double lower = 0.0;
  double upper = 0.0;
  // Mean and population standard deviation of the winsorized values.
  double mean = 0.0;
  double std = 0.0;
  // Fitted column = normalization * winsorized value (0.4 / std).
  double normalization = 1.0;
};

inline constexpr double kLinearTargetStd = 0.4;

struct BasisOptions {
  bool include_rules = true;
  bool include_linear = true;
};

// Fitting basis: rules (unnormalized indicators) then normalized linear terms.
struct Basis {
  std::vector<Rule> rules;
  std::vector<LinearTerm> linear;
  WinsorLimits limits;
  // Rules extracted before dropping duplicates and zero-variance rules.
  size_t num_extracted_rules = 0;

  size_t size() const { return rules.size() + linear.size(); }
  // Value of basis predictor k at a row of `data` (normalized for linear).
  double Value(size_t k, const Dataset& data, size_t row) const;
};

Basis BuildBasis(const TreeEnsemble& ensemble, const Dataset& data,
                 const WinsorLimits& limits, const BasisOptions& options = {});

}  // namespace rulefit

#endif  // RULEFIT_RULES_H_
