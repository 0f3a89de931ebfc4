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

#ifndef RULEFIT_BENCH_H_
#define RULEFIT_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rulefit/dataset.h"

namespace rulefit {

enum class SynthKind { kDiscreteTarget, kLinearPlusBumps };

SynthKind ParseSynthKind(std::string_view name);

struct SynthSpec {
  SynthKind kind = SynthKind::kDiscreteTarget;
  size_t num_rows = 5000;
  size_t num_columns = 100;
  // Ratio std(F*) / std(noise) on the generated sample.
  double signal_to_noise = 2.0;
  uint64_t seed = 1;
  // Discrete target only: use -0.8 exp(-2 (x4 - x5)^2) for the second term.
  bool squared_second_term = false;
};

struct SynthData {
  Dataset data;
  // Noise-free target F*(x_i).
  std::vector<double> truth;
};

// 9 prod_{j<=3} exp(-3 (1 - x_j)^2) - 0.8 exp(-2 (x4 - x5))
//   + 2 sin^2(pi x6) - 2.5 (x7 - x8)
double DiscreteTargetFunction(std::span<const double> x, bool squared_second_term);

// 10 prod_{j<=5} exp(-2 x_j^2) + sum_{j=6..35} x_j
double LinearPlusBumpsFunction(std::span<const double> x);

// Predictors x1..xn uniform on {0, 0.1, ..., 0.9}; needs n >= 8.
SynthData GenerateDiscreteTarget(const SynthSpec& spec);
// Predictors x1..xn uniform on (0, 1); needs n >= 35.
SynthData GenerateLinearPlusBumps(const SynthSpec& spec);
SynthData GenerateSynthetic(const SynthSpec& spec);

// Classification copy with labels sign(y - median(y)), sign(0) = +1.
// `degenerate` is set when every label is +1 because y is constant.
Dataset ThresholdBinary(const Dataset& data, bool* degenerate = nullptr);

// mean|y - F| / mean|y - median(y)|.
double MetricAae(std::span<const double> y, std::span<const double> f);
// mean|F* - F| / mean|F* - median(F*)|.
double MetricTargetError(std::span<const double> truth, std::span<const double> f);
// Fraction of labels y in {-1, +1} differing from sign(F).
double MetricErrorRate(std::span<const double> y, std::span<const double> f);
// e_v / min_v e_v for each variant.
std::vector<double> MetricComparative(std::span<const double> errors);

}  // namespace rulefit

#endif  // RULEFIT_BENCH_H_
