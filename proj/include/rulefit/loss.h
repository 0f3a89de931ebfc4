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

#ifndef RULEFIT_LOSS_H_
#define RULEFIT_LOSS_H_

#include <span>
#include <string>
#include <string_view>

#include "rulefit/dataset.h"

namespace rulefit {

enum class LossKind { kSquared, kHuber, kRamp };

struct LossSpec {
  LossKind kind = LossKind::kSquared;
  // Quantile of the absolute residuals that sets the Huber transition point.
  double alpha = 0.9;
  // Huber transition point. Recomputed from residuals while fitting.
  double delta = 0.0;

  // Throws ConfigError if the parameters are out of range or the loss does
  // not suit the task (ramp is for classification, the others regression).
  void Validate(Task task) const;
};

std::string_view LossName(LossKind kind);
LossKind ParseLossKind(std::string_view name);

// squared: (y - f)^2
// huber:   (y - f)^2 / 2 inside |y - f| < delta, delta (|y - f| - delta / 2)
//          outside
// ramp:    (y - clip(f, -1, 1))^2
double EvalLoss(const LossSpec& spec, double y, double f);

// -dL/df. For ramp the subgradient is 0 once the clipped prediction already
// sits on y's side (y f >= 1), and 2 (y - clip(f)) otherwise.
double NegativeGradient(const LossSpec& spec, double y, double f);

// alpha-quantile of |residuals|.
double HuberDelta(std::span<const double> residuals, double alpha);

// argmin_c sum_i L(y_i, offset_i + c). Squared: mean residual. Huber: root of
// the monotone derivative by bisection (bracket width 1e-8 relative). Ramp:
// exact minimization of the piecewise quadratic. offsets may be empty.
double LineSearch(const LossSpec& spec, std::span<const double> y,
                  std::span<const double> offsets);

// argmin_c sum_i L(y_i, c) seeding the boosting memory. For Huber the stored
// delta is used if positive; otherwise it is estimated from |y - median(y)|.
// For ramp this is mean(y) clipped to [-1, 1].
double ConstantMinimizer(const LossSpec& spec, std::span<const double> y);

}  // namespace rulefit

#endif  // RULEFIT_LOSS_H_
