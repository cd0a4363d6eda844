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

#ifndef RHPCFG_LOG_SPACE_H_
#define RHPCFG_LOG_SPACE_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace rhpcfg {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)); exact when either side is -inf.
inline double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// Two-pass log-sum-exp over a fixed-order buffer.
inline double LogSumExp(std::span<const double> xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - hi);
  return hi + std::log(sum);
}

// Log of a probability in [0, 1]; log(0) is -inf rather than an FP error.
inline double SafeLog(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

}  // namespace rhpcfg

#endif  // RHPCFG_LOG_SPACE_H_
