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

#include "rulefit/pipeline.h"

#include <cmath>
#include <string>

#include "rulefit/errors.h"
#include "rulefit/random.h"

namespace rulefit {

using nlohmann::json;

std::string_view BasisKindName(BasisKind kind) {
  switch (kind) {
    case BasisKind::kRulesAndLinear:
      return "rules+linear";
    case BasisKind::kRulesOnly:
      return "rules";
    case BasisKind::kLinearOnly:
      return "linear";
  }
  return "rules+linear";
}

BasisKind ParseBasisKind(std::string_view name) {
  if (name == "rules+linear" || name == "both") return BasisKind::kRulesAndLinear;
  if (name == "rules") return BasisKind::kRulesOnly;
  if (name == "linear") return BasisKind::kLinearOnly;
  throw ConfigError("unknown basis '" + std::string(name) +
                    "' (expected rules+linear, rules or linear)");
}

EnsembleConfig PipelineConfig::ResolvedEnsemble() const {
  EnsembleConfig e = ensemble;
  e.loss = loss;
  e.seed = DeriveSeed(seed, 1);
  return e;
}

FitConfig PipelineConfig::ResolvedFit() const {
  FitConfig f = fit;
  f.loss = loss;
  f.seed = DeriveSeed(seed, 2);
  return f;
}

void PipelineConfig::Validate(const Dataset& data) const {
  if (!(winsor_beta >= 0.0 && winsor_beta < 0.5)) {
    throw ConfigError("winsor beta must lie in [0, 0.5)");
  }
  loss.Validate(data.task());
  if (basis != BasisKind::kLinearOnly) ResolvedEnsemble().Validate(data);
  ResolvedFit().Validate(data.num_rows());
}

json PipelineConfig::ToJson() const {
  return json{{"trees", ensemble.num_trees},
              {"nu", ensemble.nu},
              {"eta", ensemble.eta},
              {"mean_tree_size", ensemble.mean_tree_size},
              {"kappa", ensemble.kappa},
              {"min_node_rows", ensemble.min_node_rows},
              {"num_lambdas", fit.num_lambdas},
              {"min_ratio", fit.min_ratio},
              {"lambdas", fit.lambdas},
              {"cv_folds", fit.cv_folds},
              {"holdout_fraction", fit.holdout_fraction},
              {"max_iter", fit.max_iter},
              {"tol", fit.tol},
              {"max_outer", fit.max_outer},
              {"loss", LossName(loss.kind)},
              {"huber_alpha", loss.alpha},
              {"winsor_beta", winsor_beta},
              {"basis", BasisKindName(basis)},
              {"seed", seed}};
}

PipelineConfig PipelineConfig::FromJson(const json& j) {
  PipelineConfig c;
  c.ensemble.num_trees = j.value("trees", c.ensemble.num_trees);
  c.ensemble.nu = j.value("nu", c.ensemble.nu);
  c.ensemble.eta = j.value("eta", c.ensemble.eta);
  c.ensemble.mean_tree_size = j.value("mean_tree_size", c.ensemble.mean_tree_size);
  c.ensemble.kappa = j.value("kappa", c.ensemble.kappa);
  c.ensemble.min_node_rows = j.value("min_node_rows", c.ensemble.min_node_rows);
  c.fit.num_lambdas = j.value("num_lambdas", c.fit.num_lambdas);
  c.fit.min_ratio = j.value("min_ratio", c.fit.min_ratio);
  c.fit.lambdas = j.value("lambdas", c.fit.lambdas);
  c.fit.cv_folds = j.value("cv_folds", c.fit.cv_folds);
  c.fit.holdout_fraction = j.value("holdout_fraction", c.fit.holdout_fraction);
  c.fit.max_iter = j.value("max_iter", c.fit.max_iter);
  c.fit.tol = j.value("tol", c.fit.tol);
  c.fit.max_outer = j.value("max_outer", c.fit.max_outer);
  c.loss.kind = ParseLossKind(j.value("loss", std::string("squared")));
  c.loss.alpha = j.value("huber_alpha", c.loss.alpha);
  c.winsor_beta = j.value("winsor_beta", c.winsor_beta);
  c.basis = ParseBasisKind(j.value("basis", std::string("rules+linear")));
  c.seed = j.value("seed", c.seed);
  return c;
}

EnsembleModel AssembleModel(const Dataset& data, const Basis& basis,
                            const PathPoint& point, const LossSpec& loss) {
  EnsembleModel model;
  model.intercept = point.intercept;
  const size_t num_rules = basis.rules.size();
  for (size_t k = 0; k < num_rules; ++k) {
    if (point.coefficients[k] != 0.0) {
      model.rules.push_back({basis.rules[k], point.coefficients[k]});
    }
  }
  for (size_t j = 0; j < basis.linear.size(); ++j) {
    const double a = point.coefficients[num_rules + j];
    if (a == 0.0) continue;
    const LinearTerm& t = basis.linear[j];
    model.linear.push_back({t.variable, a * t.normalization, t.lower, t.upper,
                            t.mean, t.std});
  }
  for (const Column& c : data.columns()) {
    model.schema.push_back({c.name, c.kind, {}, c.levels});
  }
  model.task = data.task();
  model.loss = loss;
  if (loss.kind == LossKind::kHuber) model.loss.delta = point.delta;
  model.limits = basis.limits;
  return model;
}

PipelineResult FitPipeline(const Dataset& data, const PipelineConfig& config,
                           size_t threads) {
  config.Validate(data);
  PipelineResult result;
  const WinsorLimits limits = ComputeWinsorLimits(data, config.winsor_beta);
  BasisOptions options;
  options.include_rules = config.basis != BasisKind::kLinearOnly;
  options.include_linear = config.basis != BasisKind::kRulesOnly;
  if (options.include_rules) {
    result.ensemble = GenerateEnsemble(data, config.ResolvedEnsemble());
  }
  result.basis = BuildBasis(result.ensemble, data, limits, options);

  const FitConfig fit = config.ResolvedFit();
  const DesignMatrix x = DesignMatrix::FromBasis(result.basis, data);
  const std::span<const double> y = data.response();
  result.lambdas = fit.lambdas.empty() ? LambdaGrid(LambdaMax(x, y, fit.loss), fit)
                                       : fit.lambdas;
  result.path = FitPath(x, y, fit, result.lambdas);
  result.selection = SelectLambda(x, y, fit, result.lambdas, threads);

  const size_t best = result.selection.index;
  EnsembleModel& model = result.model;
  model = AssembleModel(data, result.basis, result.path[best], config.loss);
  model.config = config.ToJson();
  model.seed = config.seed;
  FitDiagnostics& d = model.diagnostics;
  d.selected_lambda = result.lambdas[best];
  d.selected_index = best;
  d.num_nonzero = result.path[best].num_nonzero;
  d.basis_rules = result.basis.rules.size();
  d.basis_linear = result.basis.linear.size();
  d.extracted_rules = result.basis.num_extracted_rules;
  for (size_t l = 0; l < result.path.size(); ++l) {
    const PathPoint& p = result.path[l];
    d.path.push_back({p.lambda, p.num_nonzero, p.risk,
                      result.selection.estimated_risk[l], p.converged});
  }
  return result;
}

EnsembleModel FitModel(const Dataset& data, const PipelineConfig& config,
                       size_t threads) {
  return FitPipeline(data, config, threads).model;
}

}  // namespace rulefit
