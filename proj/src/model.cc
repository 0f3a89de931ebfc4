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

#include "rulefit/model.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "rulefit/errors.h"

namespace rulefit {
namespace {

using nlohmann::json;

json NumberOrNull(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double NumberOr(const json& j, double fallback) {
  return j.is_null() ? fallback : j.get<double>();
}

size_t ColumnIndex(std::span<const Column> schema, const std::string& name) {
  for (size_t j = 0; j < schema.size(); ++j) {
    if (schema[j].name == name) return j;
  }
  throw SchemaError("model refers to unknown variable '" + name + "'");
}

std::string_view KindName(ColumnKind kind) {
  return kind == ColumnKind::kCategorical ? "categorical" : "numeric";
}

}  // namespace

double EnsembleModel::Predict(std::span<const double> row) const {
  if (row.size() < schema.size()) {
    throw DomainError("prediction row has " + std::to_string(row.size()) +
                      " values, model needs " + std::to_string(schema.size()));
  }
  double f = intercept;
  for (const RuleTerm& t : rules) {
    if (t.rule.Evaluate(row)) f += t.coefficient;
  }
  for (const LinearModelTerm& t : linear) {
    f += t.coefficient * Winsorize(row[t.variable], t.lower, t.upper);
  }
  return f;
}

double EnsembleModel::PredictRow(const Dataset& data, size_t row) const {
  double f = intercept;
  for (const RuleTerm& t : rules) {
    if (t.rule.EvaluateRow(data, row)) f += t.coefficient;
  }
  for (const LinearModelTerm& t : linear) {
    f += t.coefficient * Winsorize(data.value(row, t.variable), t.lower, t.upper);
  }
  return f;
}

std::vector<double> EnsembleModel::PredictAll(const Dataset& data) const {
  CheckCompatible(data);
  std::vector<double> f(data.num_rows());
  for (size_t i = 0; i < f.size(); ++i) f[i] = PredictRow(data, i);
  return f;
}

void EnsembleModel::CheckCompatible(const Dataset& data) const {
  if (data.num_columns() != schema.size()) {
    throw SchemaError("dataset has " + std::to_string(data.num_columns()) +
                      " predictors, model expects " +
                      std::to_string(schema.size()));
  }
  for (size_t j = 0; j < schema.size(); ++j) {
    if (data.column(j).name != schema[j].name ||
        data.column(j).kind != schema[j].kind) {
      throw SchemaError("predictor " + std::to_string(j) + " is '" +
                        data.column(j).name + "', model expects '" +
                        schema[j].name + "'");
    }
  }
}

json RuleToJson(const Rule& rule, double coefficient) {
  json conjuncts = json::array();
  // Variable names are resolved by the caller through "var_index".
  for (const Conjunct& c : rule.conjuncts) {
    json jc;
    jc["var_index"] = c.variable;
    if (c.categorical) {
      jc["op"] = c.negated ? "not_in_set" : "in_set";
      json set = json::array();
      for (size_t l = 0; l < c.levels.size(); ++l) {
        if (c.levels[l]) set.push_back(l);
      }
      jc["set"] = set;
    } else {
      jc["op"] = "in_interval";
      jc["lo"] = NumberOrNull(c.lo);
      jc["hi"] = NumberOrNull(c.hi);
    }
    conjuncts.push_back(jc);
  }
  return json{{"conjuncts", conjuncts},
              {"support", rule.support},
              {"scale", rule.scale},
              {"coefficient", coefficient},
              {"tree", rule.tree},
              {"node", rule.node}};
}

Rule RuleFromJson(const json& j, std::span<const Column> schema) {
  Rule rule;
  for (const json& jc : j.at("conjuncts")) {
    Conjunct c;
    if (jc.contains("var")) {
      c.variable = ColumnIndex(schema, jc.at("var").get<std::string>());
    } else {
      c.variable = jc.at("var_index").get<size_t>();
    }
    if (c.variable >= schema.size()) throw SchemaError("rule variable out of range");
    const std::string op = jc.at("op").get<std::string>();
    if (op == "in_interval") {
      c.lo = NumberOr(jc.value("lo", json()), -std::numeric_limits<double>::infinity());
      c.hi = NumberOr(jc.value("hi", json()), std::numeric_limits<double>::infinity());
    } else if (op == "in_set" || op == "not_in_set") {
      c.categorical = true;
      c.negated = op == "not_in_set";
      const Column& col = schema[c.variable];
      c.levels.assign(col.levels.size(), false);
      for (const json& level : jc.at("set")) {
        size_t id = 0;
        if (level.is_string()) {
          const auto it = std::find(col.levels.begin(), col.levels.end(),
                                    level.get<std::string>());
          if (it == col.levels.end()) throw SchemaError("unknown level in rule");
          id = static_cast<size_t>(it - col.levels.begin());
        } else {
          id = level.get<size_t>();
        }
        if (id >= c.levels.size()) throw SchemaError("rule level out of range");
        c.levels[id] = true;
      }
    } else {
      throw SchemaError("unknown rule operator '" + op + "'");
    }
    rule.conjuncts.push_back(std::move(c));
  }
  std::sort(rule.conjuncts.begin(), rule.conjuncts.end(),
            [](const Conjunct& a, const Conjunct& b) { return a.variable < b.variable; });
  rule.support = j.value("support", 0.0);
  rule.scale = j.value("scale", std::sqrt(rule.support * (1.0 - rule.support)));
  rule.tree = j.value("tree", size_t{0});
  rule.node = j.value("node", size_t{0});
  return rule;
}

json ModelToJson(const EnsembleModel& model) {
  json schema = json::array();
  for (const Column& c : model.schema) {
    schema.push_back({{"name", c.name}, {"kind", KindName(c.kind)}, {"levels", c.levels}});
  }
  json rules = json::array();
  for (const RuleTerm& t : model.rules) {
    json jr = RuleToJson(t.rule, t.coefficient);
    // Human-readable names next to the indices.
    for (size_t k = 0; k < t.rule.conjuncts.size(); ++k) {
      const Conjunct& c = t.rule.conjuncts[k];
      const Column& col = model.schema[c.variable];
      json& jc = jr["conjuncts"][k];
      jc["var"] = col.name;
      if (c.categorical) {
        json names = json::array();
        for (size_t l = 0; l < c.levels.size(); ++l) {
          if (c.levels[l]) names.push_back(col.levels[l]);
        }
        jc["set"] = names;
      }
    }
    rules.push_back(jr);
  }
  json linear = json::array();
  for (const LinearModelTerm& t : model.linear) {
    linear.push_back({{"var", model.schema[t.variable].name},
                      {"coefficient", t.coefficient},
                      {"lower", t.lower},
                      {"upper", t.upper},
                      {"mean", t.mean},
                      {"std", t.std}});
  }
  json limits_lower = json::array();
  json limits_upper = json::array();
  for (size_t j = 0; j < model.limits.lower.size(); ++j) {
    limits_lower.push_back(NumberOrNull(model.limits.lower[j]));
    limits_upper.push_back(NumberOrNull(model.limits.upper[j]));
  }
  json path = json::array();
  for (const PathSummary& p : model.diagnostics.path) {
    path.push_back({{"lambda", p.lambda},
                    {"nonzero", p.num_nonzero},
                    {"risk", p.risk},
                    {"estimated_risk", p.estimated_risk},
                    {"converged", p.converged}});
  }
  const FitDiagnostics& d = model.diagnostics;
  return json{
      {"format", "rulefit-model"},
      {"format_version", 1},
      {"task", model.task == Task::kRegression ? "regression" : "classification"},
      {"loss",
       {{"kind", LossName(model.loss.kind)},
        {"alpha", model.loss.alpha},
        {"delta", model.loss.delta}}},
      {"target", model.target},
      {"intercept", model.intercept},
      {"rules", rules},
      {"linear", linear},
      {"schema", schema},
      {"winsor_limits",
       {{"beta", model.limits.beta}, {"lower", limits_lower}, {"upper", limits_upper}}},
      {"selected_lambda", d.selected_lambda},
      {"seed", model.seed},
      {"diagnostics",
       {{"selected_index", d.selected_index},
        {"nonzero", d.num_nonzero},
        {"basis_rules", d.basis_rules},
        {"basis_linear", d.basis_linear},
        {"extracted_rules", d.extracted_rules},
        {"path", path}}},
      {"config", model.config}};
}

EnsembleModel ModelFromJson(const json& j) {
  if (j.value("format", std::string()) != "rulefit-model") {
    throw SchemaError("not a rulefit model document");
  }
  EnsembleModel model;
  for (const json& c : j.at("schema")) {
    Column col;
    col.name = c.at("name").get<std::string>();
    col.kind = c.at("kind").get<std::string>() == "categorical"
                   ? ColumnKind::kCategorical
                   : ColumnKind::kNumeric;
    col.levels = c.value("levels", std::vector<std::string>{});
    model.schema.push_back(std::move(col));
  }
  model.task = j.at("task").get<std::string>() == "classification"
                   ? Task::kBinaryClassification
                   : Task::kRegression;
  const json& loss = j.at("loss");
  model.loss.kind = ParseLossKind(loss.at("kind").get<std::string>());
  model.loss.alpha = loss.value("alpha", 0.9);
  model.loss.delta = loss.value("delta", 0.0);
  model.target = j.value("target", std::string());
  model.intercept = j.at("intercept").get<double>();
  for (const json& jr : j.at("rules")) {
    model.rules.push_back({RuleFromJson(jr, model.schema),
                           jr.at("coefficient").get<double>()});
  }
  for (const json& jl : j.at("linear")) {
    LinearModelTerm t;
    t.variable = ColumnIndex(model.schema, jl.at("var").get<std::string>());
    t.coefficient = jl.at("coefficient").get<double>();
    t.lower = jl.at("lower").get<double>();
    t.upper = jl.at("upper").get<double>();
    t.mean = jl.at("mean").get<double>();
    t.std = jl.at("std").get<double>();
    model.linear.push_back(t);
  }
  const json& limits = j.at("winsor_limits");
  model.limits.beta = limits.value("beta", 0.025);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const json& v : limits.at("lower")) model.limits.lower.push_back(NumberOr(v, nan));
  for (const json& v : limits.at("upper")) model.limits.upper.push_back(NumberOr(v, nan));
  model.seed = j.value("seed", uint64_t{0});
  FitDiagnostics& d = model.diagnostics;
  d.selected_lambda = j.value("selected_lambda", 0.0);
  if (j.contains("diagnostics")) {
    const json& jd = j.at("diagnostics");
    d.selected_index = jd.value("selected_index", size_t{0});
    d.num_nonzero = jd.value("nonzero", size_t{0});
    d.basis_rules = jd.value("basis_rules", size_t{0});
    d.basis_linear = jd.value("basis_linear", size_t{0});
    d.extracted_rules = jd.value("extracted_rules", size_t{0});
    for (const json& p : jd.value("path", json::array())) {
      d.path.push_back({p.at("lambda").get<double>(), p.at("nonzero").get<size_t>(),
                        p.at("risk").get<double>(), p.at("estimated_risk").get<double>(),
                        p.at("converged").get<bool>()});
    }
  }
  model.config = j.value("config", json::object());
  return model;
}

void WriteFileAtomically(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

void SaveModel(const EnsembleModel& model, const std::string& path) {
  WriteFileAtomically(path, ModelToJson(model).dump(1) + "\n");
}

EnsembleModel LoadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("model '" + path + "': " + e.what());
  }
  return ModelFromJson(j);
}

}  // namespace rulefit
