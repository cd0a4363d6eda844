// Copyright 2026 The rhpcfg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RHPCFG_RANDOM_H_
#define RHPCFG_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace rhpcfg {

// Seeded generator whose derived draws do not depend on the standard
// library's distribution implementations, so sequences match across
// toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n).
  uint64_t Below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double Normal(double mean = 0.0, double stddev = 1.0) {
    double u1;
    do {
      u1 = Uniform();
    } while (u1 <= 0.0);
    const double u2 = Uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * std::numbers::pi * u2);
  }

  // Draws an index proportionally to exp(logw[i]); at least one entry must be
  // finite.
  size_t Categorical(std::span<const double> logw) {
    double hi = -INFINITY;
    for (double w : logw) hi = std::max(hi, w);
    double total = 0.0;
    for (double w : logw) total += std::exp(w - hi);
    double u = Uniform() * total;
    size_t last = 0;
    for (size_t i = 0; i < logw.size(); ++i) {
      if (logw[i] == -INFINITY) continue;
      last = i;
      u -= std::exp(logw[i] - hi);
      if (u < 0.0) return i;
    }
    return last;
  }

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[Below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rhpcfg

#endif  // RHPCFG_RANDOM_H_
