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

#include "rulefit/bench.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rulefit/errors.h"
#include "rulefit/random.h"

namespace rulefit {
namespace {

double PopulationStd(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

// Adds Gaussian noise whose sample standard deviation is exactly
// std(truth) / signal_to_noise.
std::vector<double> AddNoise(std::span<const double> truth, double snr, Rng& rng) {
  std::vector<double> noise(truth.size());
  for (double& e : noise) e = rng.Normal();
  const double target = PopulationStd(truth) / snr;
  const double actual = PopulationStd(noise);
  const double scale = actual > 0.0 ? target / actual : 0.0;
  std::vector<double> y(truth.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = truth[i] + scale * noise[i];
  return y;
}

std::vector<Column> NumericColumns(size_t n, size_t rows) {
  std::vector<Column> cols(n);
  for (size_t j = 0; j < n; ++j) {
    cols[j].name = "x" + std::to_string(j + 1);
    cols[j].values.resize(rows);
  }
  return cols;
}

void CheckSpec(const SynthSpec& spec, size_t min_columns) {
  if (spec.num_rows == 0) throw ConfigError("synthetic data needs at least one row");
  if (spec.num_columns < min_columns) {
    throw ConfigError("generator needs at least " + std::to_string(min_columns) +
                      " columns");
  }
  if (!(spec.signal_to_noise > 0.0)) throw ConfigError("signal-to-noise must be > 0");
}

}  // namespace

SynthKind ParseSynthKind(std::string_view name) {
  if (name == "eq51" || name == "discrete") return SynthKind::kDiscreteTarget;
  if (name == "eq27" || name == "bumps") return SynthKind::kLinearPlusBumps;
  throw ConfigError("unknown generator '" + std::string(name) + "'");
}

double DiscreteTargetFunction(std::span<const double> x, bool squared_second_term) {
  double bump = 9.0;
  for (size_t j = 0; j < 3; ++j) bump *= std::exp(-3.0 * (1.0 - x[j]) * (1.0 - x[j]));
  const double d = x[3] - x[4];
  const double second = -0.8 * std::exp(-2.0 * (squared_second_term ? d * d : d));
  const double s = std::sin(std::numbers::pi * x[5]);
  return bump + second + 2.0 * s * s - 2.5 * (x[6] - x[7]);
}

double LinearPlusBumpsFunction(std::span<const double> x) {
  double bump = 10.0;
  for (size_t j = 0; j < 5; ++j) bump *= std::exp(-2.0 * x[j] * x[j]);
  double linear = 0.0;
  for (size_t j = 5; j < 35; ++j) linear += x[j];
  return bump + linear;
}

SynthData GenerateDiscreteTarget(const SynthSpec& spec) {
  CheckSpec(spec, 8);
  Rng rng(spec.seed);
  std::vector<Column> cols = NumericColumns(spec.num_columns, spec.num_rows);
  std::vector<double> truth(spec.num_rows);
  std::vector<double> row(spec.num_columns);
  for (size_t i = 0; i < spec.num_rows; ++i) {
    for (size_t j = 0; j < spec.num_columns; ++j) {
      row[j] = static_cast<double>(rng.UniformInt(10)) / 10.0;
      cols[j].values[i] = row[j];
    }
    truth[i] = DiscreteTargetFunction(row, spec.squared_second_term);
  }
  std::vector<double> y = AddNoise(truth, spec.signal_to_noise, rng);
  return {Dataset(std::move(cols), std::move(y), Task::kRegression), std::move(truth)};
}

SynthData GenerateLinearPlusBumps(const SynthSpec& spec) {
  CheckSpec(spec, 35);
  Rng rng(spec.seed);
  std::vector<Column> cols = NumericColumns(spec.num_columns, spec.num_rows);
  std::vector<double> truth(spec.num_rows);
  std::vector<double> row(spec.num_columns);
  for (size_t i = 0; i < spec.num_rows; ++i) {
    for (size_t j = 0; j < spec.num_columns; ++j) {
      row[j] = rng.Uniform();
      cols[j].values[i] = row[j];
    }
    truth[i] = LinearPlusBumpsFunction(row);
  }
  std::vector<double> y = AddNoise(truth, spec.signal_to_noise, rng);
  return {Dataset(std::move(cols), std::move(y), Task::kRegression), std::move(truth)};
}

SynthData GenerateSynthetic(const SynthSpec& spec) {
  return spec.kind == SynthKind::kDiscreteTarget ? GenerateDiscreteTarget(spec)
                                                 : GenerateLinearPlusBumps(spec);
}

Dataset ThresholdBinary(const Dataset& data, bool* degenerate) {
  if (data.task() != Task::kRegression) {
    throw DomainError("thresholding needs a regression response");
  }
  const std::span<const double> y = data.response();
  const double median = Quantile(y, 0.5);
  std::vector<double> labels(y.size());
  bool all_positive = true;
  for (size_t i = 0; i < y.size(); ++i) {
    labels[i] = y[i] - median >= 0.0 ? 1.0 : -1.0;
    all_positive = all_positive && labels[i] > 0.0;
  }
  if (degenerate != nullptr) *degenerate = all_positive;
  return data.WithResponse(std::move(labels), Task::kBinaryClassification);
}

double MetricAae(std::span<const double> y, std::span<const double> f) {
  if (y.empty() || y.size() != f.size()) {
    throw DomainError("aae needs equal, non-empty response and prediction vectors");
  }
  const double median = Quantile(y, 0.5);
  double num = 0.0;
  double den = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    num += std::abs(y[i] - f[i]);
    den += std::abs(y[i] - median);
  }
  if (den == 0.0) throw DomainError("aae undefined for a constant response");
  return num / den;
}

double MetricTargetError(std::span<const double> truth, std::span<const double> f) {
  if (truth.empty() || truth.size() != f.size()) {
    throw DomainError("target error needs equal, non-empty vectors");
  }
  const double median = Quantile(truth, 0.5);
  double num = 0.0;
  double den = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    num += std::abs(truth[i] - f[i]);
    den += std::abs(truth[i] - median);
  }
  if (den == 0.0) throw DomainError("target error undefined for a constant target");
  return num / den;
}

double MetricErrorRate(std::span<const double> y, std::span<const double> f) {
  if (y.empty() || y.size() != f.size()) {
    throw DomainError("error rate needs equal, non-empty vectors");
  }
  size_t wrong = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double label = f[i] >= 0.0 ? 1.0 : -1.0;
    if (label != y[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(y.size());
}

std::vector<double> MetricComparative(std::span<const double> errors) {
  if (errors.size() < 2) throw DomainError("comparison needs at least two variants");
  const double best = *std::min_element(errors.begin(), errors.end());
  if (!(best > 0.0)) throw DomainError("comparison needs positive errors");
  std::vector<double> ratios(errors.size());
  for (size_t v = 0; v < errors.size(); ++v) ratios[v] = errors[v] / best;
  return ratios;
}

}  // namespace rulefit
