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

#ifndef RULEFIT_RANDOM_H_
#define RULEFIT_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rulefit {

// Seeded random source used by every stochastic step in the library.
//
// The raw stream is std::mt19937_64, whose recurrence and output are fixed by
// the C++ standard. The std:: distribution classes are implementation-defined,
// so all variates are derived here from the raw 64-bit words:
//   uniform     u = (w >> 11) * 2^-53                       in [0, 1)
//   integer     rejection sampling on w for a bound b       in [0, b)
//   exponential -mean * log1p(-u)
//   normal      Box-Muller on two uniforms, second value cached
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). bound must be positive.
  uint64_t UniformInt(uint64_t bound);

  double Exponential(double mean);

  double Normal();

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(UniformInt(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // k distinct indices from [0, n), returned in increasing order.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k);

  // A uniformly random permutation of [0, n).
  std::vector<size_t> Permutation(size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// Derives an independent stream seed from a base seed and a stream index
// (splitmix64 finalizer applied to base + golden-ratio * (index + 1)).
uint64_t DeriveSeed(uint64_t base, uint64_t index);

}  // namespace rulefit

#endif  // RULEFIT_RANDOM_H_
