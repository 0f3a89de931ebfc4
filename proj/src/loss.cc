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

#include "rulefit/loss.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rulefit/errors.h"

namespace rulefit {
namespace {

double Clip(double f) { return std::clamp(f, -1.0, 1.0); }

double HuberPsi(double r, double delta) {
  if (std::abs(r) < delta) return r;
  return r > 0 ? delta : -delta;
}

std::vector<double> Residuals(std::span<const double> y,
                              std::span<const double> offsets) {
  std::vector<double> r(y.begin(), y.end());
  if (!offsets.empty()) {
    for (size_t i = 0; i < r.size(); ++i) r[i] -= offsets[i];
  }
  return r;
}

double HuberLineSearch(std::vector<double> r, double delta) {
  if (delta <= 0.0) return Quantile(r, 0.5);
  auto [min_it, max_it] = std::minmax_element(r.begin(), r.end());
  double lo = *min_it;
  double hi = *max_it;
  const double width = 1e-8 * std::max(1.0, hi - lo);
  // sum psi(r_i - c) is non-increasing in c; positive at lo, negative at hi.
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    double slope = 0.0;
    for (double ri : r) slope += HuberPsi(ri - mid, delta);
    if (slope > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Exact minimizer of sum (y_i - clip(f_i + c))^2. The objective is quadratic
// between consecutive breakpoints c = -1 - f_i and c = 1 - f_i.
double RampLineSearch(std::span<const double> y,
                      std::span<const double> offsets) {
  const size_t n = y.size();
  struct Event {
    double at;
    size_t index;
    bool enters;  // low-clipped -> interior, otherwise interior -> high
  };
  std::vector<Event> events;
  events.reserve(2 * n);
  double low = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double f = offsets.empty() ? 0.0 : offsets[i];
    events.push_back({-1.0 - f, i, true});
    events.push_back({1.0 - f, i, false});
    low += (y[i] + 1.0) * (y[i] + 1.0);
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.at != b.at) return a.at < b.at;
    return a.enters && !b.enters;
  });

  double high = 0.0;
  double count = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double best_c = events.front().at;
  double best_value = low;
  auto consider = [&](double c) {
    const double value = low + high + s2 - 2.0 * c * s1 + count * c * c;
    if (value < best_value - 1e-15 * std::abs(best_value)) {
      best_value = value;
      best_c = c;
    }
  };

  for (size_t e = 0; e < events.size();) {
    const double at = events[e].at;
    for (; e < events.size() && events[e].at == at; ++e) {
      const size_t i = events[e].index;
      const double f = offsets.empty() ? 0.0 : offsets[i];
      const double d = y[i] - f;
      if (events[e].enters) {
        low -= (y[i] + 1.0) * (y[i] + 1.0);
        count += 1.0;
        s1 += d;
        s2 += d * d;
      } else {
        high += (y[i] - 1.0) * (y[i] - 1.0);
        count -= 1.0;
        s1 -= d;
        s2 -= d * d;
      }
    }
    if (count < 0.5) {
      count = 0.0;
      s1 = 0.0;
      s2 = 0.0;
    }
    const double next = e < events.size()
                            ? events[e].at
                            : std::numeric_limits<double>::infinity();
    consider(at);
    if (count > 0.0) consider(std::clamp(s1 / count, at, next));
  }
  return best_c;
}

}  // namespace

void LossSpec::Validate(Task task) const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("huber alpha must lie in (0, 1]");
  }
  if (!(delta >= 0.0)) throw ConfigError("huber delta must be non-negative");
  const bool classification = task == Task::kBinaryClassification;
  if (kind == LossKind::kRamp && !classification) {
    throw ConfigError("ramp loss requires a binary classification task");
  }
  if (kind != LossKind::kRamp && classification) {
    throw ConfigError(std::string(LossName(kind)) +
                      " loss requires a regression task");
  }
}

std::string_view LossName(LossKind kind) {
  switch (kind) {
    case LossKind::kSquared:
      return "squared";
    case LossKind::kHuber:
      return "huber";
    case LossKind::kRamp:
      return "ramp";
  }
  return "squared";
}

LossKind ParseLossKind(std::string_view name) {
  if (name == "squared") return LossKind::kSquared;
  if (name == "huber") return LossKind::kHuber;
  if (name == "ramp") return LossKind::kRamp;
  throw ConfigError("unknown loss '" + std::string(name) + "'");
}

double EvalLoss(const LossSpec& spec, double y, double f) {
  switch (spec.kind) {
    case LossKind::kSquared:
      return (y - f) * (y - f);
    case LossKind::kHuber: {
      const double a = std::abs(y - f);
      if (a < spec.delta) return 0.5 * a * a;
      return spec.delta * (a - 0.5 * spec.delta);
    }
    case LossKind::kRamp: {
      const double d = y - Clip(f);
      return d * d;
    }
  }
  return 0.0;
}

double NegativeGradient(const LossSpec& spec, double y, double f) {
  switch (spec.kind) {
    case LossKind::kSquared:
      return 2.0 * (y - f);
    case LossKind::kHuber:
      return HuberPsi(y - f, spec.delta);
    case LossKind::kRamp:
      if (y * f >= 1.0) return 0.0;
      return 2.0 * (y - Clip(f));
  }
  return 0.0;
}

double HuberDelta(std::span<const double> residuals, double alpha) {
  if (residuals.empty()) throw DomainError("huber delta of empty residuals");
  std::vector<double> a(residuals.size());
  std::transform(residuals.begin(), residuals.end(), a.begin(),
                 [](double r) { return std::abs(r); });
  return Quantile(a, alpha);
}

double LineSearch(const LossSpec& spec, std::span<const double> y,
                  std::span<const double> offsets) {
  if (y.empty()) return 0.0;
  switch (spec.kind) {
    case LossKind::kSquared: {
      double sum = 0.0;
      for (size_t i = 0; i < y.size(); ++i) {
        sum += y[i] - (offsets.empty() ? 0.0 : offsets[i]);
      }
      return sum / static_cast<double>(y.size());
    }
    case LossKind::kHuber:
      return HuberLineSearch(Residuals(y, offsets), spec.delta);
    case LossKind::kRamp:
      return RampLineSearch(y, offsets);
  }
  return 0.0;
}

double ConstantMinimizer(const LossSpec& spec, std::span<const double> y) {
  if (y.empty()) throw DomainError("constant minimizer of an empty response");
  switch (spec.kind) {
    case LossKind::kSquared:
      return LineSearch(spec, y, {});
    case LossKind::kHuber: {
      LossSpec s = spec;
      if (s.delta <= 0.0) {
        const double median = Quantile(y, 0.5);
        std::vector<double> centered(y.begin(), y.end());
        for (double& v : centered) v -= median;
        s.delta = HuberDelta(centered, s.alpha);
      }
      return LineSearch(s, y, {});
    }
    case LossKind::kRamp: {
      double sum = 0.0;
      for (double v : y) sum += v;
      return Clip(sum / static_cast<double>(y.size()));
    }
  }
  return 0.0;
}

}  // namespace rulefit
