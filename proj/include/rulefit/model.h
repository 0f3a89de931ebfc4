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

#ifndef RULEFIT_MODEL_H_
#define RULEFIT_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rulefit/dataset.h"
#include "rulefit/loss.h"
#include "rulefit/rules.h"

namespace rulefit {

struct RuleTerm {
  Rule rule;
  double coefficient = 0.0;
};

// Slope on the winsorized variable in its original units.
struct LinearModelTerm {
  size_t variable = 0;
  double coefficient = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  // Mean and standard deviation of the winsorized variable on training data.
  double mean = 0.0;
  double std = 0.0;
};

struct PathSummary {
  double lambda = 0.0;
  size_t num_nonzero = 0;
  double risk = 0.0;
  double estimated_risk = 0.0;
  bool converged = true;
};

struct FitDiagnostics {
  double selected_lambda = 0.0;
  size_t selected_index = 0;
  size_t num_nonzero = 0;
  size_t basis_rules = 0;
  size_t basis_linear = 0;
  size_t extracted_rules = 0;
  std::vector<PathSummary> path;
};

// F(x) = intercept + sum_k a_k r_k(x) + sum_j b_j l_j(x_j).
class EnsembleModel {
 public:
  double intercept = 0.0;
  std::vector<RuleTerm> rules;
  std::vector<LinearModelTerm> linear;
  // Predictor schema of the training data (names, kinds, levels).
  std::vector<Column> schema;
  std::string target;
  Task task = Task::kRegression;
  LossSpec loss;
  WinsorLimits limits;
  FitDiagnostics diagnostics;
  // Settings that produced the model, replayed by the null refits.
  nlohmann::json config;
  uint64_t seed = 0;

  size_t num_variables() const { return schema.size(); }

  double Predict(std::span<const double> row) const;
  double PredictRow(const Dataset& data, size_t row) const;
  std::vector<double> PredictAll(const Dataset& data) const;

  // -1 / +1 by the sign of F for classification (sign(0) = +1).
  static double Label(double f) { return f >= 0.0 ? 1.0 : -1.0; }

  // Checks that a dataset's columns match the training schema by position.
  void CheckCompatible(const Dataset& data) const;
};

nlohmann::json ModelToJson(const EnsembleModel& model);
EnsembleModel ModelFromJson(const nlohmann::json& json);

nlohmann::json RuleToJson(const Rule& rule, double coefficient);
Rule RuleFromJson(const nlohmann::json& json, std::span<const Column> schema);

// Writes through a temporary file and rename.
void WriteFileAtomically(const std::string& path, const std::string& contents);

void SaveModel(const EnsembleModel& model, const std::string& path);
EnsembleModel LoadModel(const std::string& path);

}  // namespace rulefit

#endif  // RULEFIT_MODEL_H_
