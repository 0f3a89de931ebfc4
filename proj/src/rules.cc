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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include "rulefit/errors.h"

namespace rulefit {
namespace {

std::string HexDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

std::string FormatNumber(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void IntersectCategorical(Conjunct& into, const Conjunct& add) {
  const size_t size = std::max(into.levels.size(), add.levels.size());
  into.levels.resize(size, false);
  std::vector<bool> other = add.levels;
  other.resize(size, false);
  if (!into.negated && !add.negated) {
    for (size_t l = 0; l < size; ++l) into.levels[l] = into.levels[l] && other[l];
  } else if (!into.negated && add.negated) {
    for (size_t l = 0; l < size; ++l) into.levels[l] = into.levels[l] && !other[l];
  } else if (into.negated && !add.negated) {
    for (size_t l = 0; l < size; ++l) into.levels[l] = other[l] && !into.levels[l];
    into.negated = false;
  } else {
    for (size_t l = 0; l < size; ++l) into.levels[l] = into.levels[l] || other[l];
  }
}

}  // namespace

bool Rule::Uses(size_t variable) const {
  return std::any_of(conjuncts.begin(), conjuncts.end(),
                     [&](const Conjunct& c) { return c.variable == variable; });
}

bool Rule::Evaluate(std::span<const double> row) const {
  if (conjuncts.empty()) throw DomainError("rule without conditions");
  for (const Conjunct& c : conjuncts) {
    if (!c.Holds(row[c.variable])) return false;
  }
  return true;
}

bool Rule::EvaluateRow(const Dataset& data, size_t row) const {
  if (conjuncts.empty()) throw DomainError("rule without conditions");
  for (const Conjunct& c : conjuncts) {
    if (!c.Holds(data.value(row, c.variable))) return false;
  }
  return true;
}

std::string Rule::Key() const {
  std::string key;
  for (const Conjunct& c : conjuncts) {
    key += std::to_string(c.variable);
    if (c.categorical) {
      key += c.negated ? "!{" : "{";
      for (size_t l = 0; l < c.levels.size(); ++l) {
        if (c.levels[l]) key += std::to_string(l) + ",";
      }
      key += "}";
    } else {
      key += "(" + HexDouble(c.lo) + "," + HexDouble(c.hi) + "]";
    }
    key += ";";
  }
  return key;
}

std::string Rule::ToString(std::span<const Column> columns) const {
  std::string out;
  for (size_t k = 0; k < conjuncts.size(); ++k) {
    const Conjunct& c = conjuncts[k];
    const Column& col = columns[c.variable];
    if (k > 0) out += " and ";
    if (c.categorical) {
      out += col.name + (c.negated ? " not in {" : " in {");
      bool first = true;
      for (size_t l = 0; l < c.levels.size(); ++l) {
        if (!c.levels[l]) continue;
        if (!first) out += ", ";
        out += l < col.levels.size() ? col.levels[l] : std::to_string(l);
        first = false;
      }
      out += "}";
    } else if (std::isinf(c.lo)) {
      out += col.name + " <= " + FormatNumber(c.hi);
    } else if (std::isinf(c.hi)) {
      out += col.name + " > " + FormatNumber(c.lo);
    } else {
      out += FormatNumber(c.lo) + " < " + col.name + " <= " + FormatNumber(c.hi);
    }
  }
  return out;
}

void AddCondition(std::vector<Conjunct>& conjuncts, const SplitSpec& split,
                  bool left) {
  Conjunct add;
  add.variable = split.variable;
  add.categorical = split.categorical;
  if (split.categorical) {
    add.levels = split.left_levels;
    add.negated = !left;
  } else if (left) {
    add.hi = split.threshold;
  } else {
    add.lo = split.threshold;
  }
  auto it = std::lower_bound(
      conjuncts.begin(), conjuncts.end(), add.variable,
      [](const Conjunct& c, size_t v) { return c.variable < v; });
  if (it == conjuncts.end() || it->variable != add.variable) {
    conjuncts.insert(it, std::move(add));
    return;
  }
  if (add.categorical) {
    IntersectCategorical(*it, add);
  } else {
    it->lo = std::max(it->lo, add.lo);
    it->hi = std::min(it->hi, add.hi);
  }
}

std::vector<Rule> ExtractRules(const Tree& tree, size_t tree_index) {
  std::vector<Rule> rules;
  if (tree.num_nodes() == 0) return rules;
  // Depth-first from the root carrying the accumulated conditions.
  struct Pending {
    size_t node;
    std::vector<Conjunct> conditions;
  };
  std::vector<Pending> stack;
  stack.push_back({0, {}});
  while (!stack.empty()) {
    Pending p = std::move(stack.back());
    stack.pop_back();
    const TreeNode& node = tree.node(p.node);
    if (p.node != 0) {
      Rule rule;
      rule.conjuncts = p.conditions;
      rule.tree = tree_index;
      rule.node = p.node;
      rules.push_back(std::move(rule));
    }
    if (node.is_terminal()) continue;
    std::vector<Conjunct> right = p.conditions;
    AddCondition(right, *node.split, false);
    AddCondition(p.conditions, *node.split, true);
    stack.push_back({static_cast<size_t>(node.right), std::move(right)});
    stack.push_back({static_cast<size_t>(node.left), std::move(p.conditions)});
  }
  return rules;
}

double ComputeSupport(Rule& rule, const Dataset& data) {
  const size_t n = data.num_rows();
  size_t fired = 0;
  for (size_t i = 0; i < n; ++i) fired += rule.EvaluateRow(data, i) ? 1 : 0;
  rule.support = n == 0 ? 0.0 : static_cast<double>(fired) / static_cast<double>(n);
  rule.scale = std::sqrt(rule.support * (1.0 - rule.support));
  return rule.support;
}

double Basis::Value(size_t k, const Dataset& data, size_t row) const {
  if (k < rules.size()) return rules[k].EvaluateRow(data, row) ? 1.0 : 0.0;
  const LinearTerm& t = linear[k - rules.size()];
  return t.normalization *
         Winsorize(data.value(row, t.variable), t.lower, t.upper);
}

Basis BuildBasis(const TreeEnsemble& ensemble, const Dataset& data,
                 const WinsorLimits& limits, const BasisOptions& options) {
  if (ensemble.trees.empty() && options.include_rules) {
    throw DomainError("cannot build a rule basis from an empty ensemble");
  }
  Basis basis;
  basis.limits = limits;
  if (options.include_rules) {
    std::unordered_set<std::string> seen;
    for (size_t m = 0; m < ensemble.trees.size(); ++m) {
      std::vector<Rule> extracted = ExtractRules(ensemble.trees[m], m);
      basis.num_extracted_rules += extracted.size();
      for (Rule& rule : extracted) {
        if (!seen.insert(rule.Key()).second) continue;
        ComputeSupport(rule, data);
        if (rule.support <= 0.0 || rule.support >= 1.0) continue;
        basis.rules.push_back(std::move(rule));
      }
    }
  }
  if (options.include_linear) {
    const double n = static_cast<double>(data.num_rows());
    for (size_t j = 0; j < data.num_columns(); ++j) {
      if (data.column(j).is_categorical()) continue;
      LinearTerm term;
      term.variable = j;
      term.lower = limits.lower[j];
      term.upper = limits.upper[j];
      double sum = 0.0;
      for (double v : data.column(j).values) {
        sum += Winsorize(v, term.lower, term.upper);
      }
      term.mean = sum / n;
      double ss = 0.0;
      for (double v : data.column(j).values) {
        const double d = Winsorize(v, term.lower, term.upper) - term.mean;
        ss += d * d;
      }
      term.std = std::sqrt(ss / n);
      if (!(term.std > 0.0)) continue;
      term.normalization = kLinearTargetStd / term.std;
      basis.linear.push_back(term);
    }
  }
  return basis;
}

}  // namespace rulefit
