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

#ifndef RULEFIT_PIPELINE_H_
#define RULEFIT_PIPELINE_H_

#include <cstddef>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rulefit/dataset.h"
#include "rulefit/ensemble.h"
#include "rulefit/model.h"
#include "rulefit/rules.h"
#include "rulefit/sparse_fit.h"

namespace rulefit {

enum class BasisKind { kRulesAndLinear, kRulesOnly, kLinearOnly };

std::string_view BasisKindName(BasisKind kind);
BasisKind ParseBasisKind(std::string_view name);

// Everything needed to reproduce a fit. `loss` and `seed` override the
// copies inside `ensemble` and `fit`.
struct PipelineConfig {
  EnsembleConfig ensemble;
  FitConfig fit;
  LossSpec loss;
  double winsor_beta = 0.025;
  BasisKind basis = BasisKind::kRulesAndLinear;
  uint64_t seed = 1;

  // Copies with loss and seeds filled in.
  EnsembleConfig ResolvedEnsemble() const;
  FitConfig ResolvedFit() const;
  void Validate(const Dataset& data) const;

  nlohmann::json ToJson() const;
  static PipelineConfig FromJson(const nlohmann::json& json);
};

struct PipelineResult {
  EnsembleModel model;
  TreeEnsemble ensemble;
  Basis basis;
  std::vector<double> lambdas;
  std::vector<PathPoint> path;
  LambdaSelection selection;
};

// Trees, rule extraction, basis construction, lasso path and lambda selection.
PipelineResult FitPipeline(const Dataset& data, const PipelineConfig& config,
                           size_t threads = 1);

EnsembleModel FitModel(const Dataset& data, const PipelineConfig& config,
                       size_t threads = 1);

// Model from one path point of a fitted basis (coefficients on the basis
// scale are converted to the original variable scale).
EnsembleModel AssembleModel(const Dataset& data, const Basis& basis,
                            const PathPoint& point, const LossSpec& loss);

}  // namespace rulefit

#endif  // RULEFIT_PIPELINE_H_
