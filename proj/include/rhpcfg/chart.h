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

#ifndef RHPCFG_CHART_H_
#define RHPCFG_CHART_H_

#include <span>
#include <vector>

#include "rhpcfg/grammar.h"
#include "rhpcfg/log_space.h"
#include "rhpcfg/rule_table.h"

namespace rhpcfg {

// Throws std::invalid_argument for an empty sentence or a token outside the
// vocabulary.
void CheckSentence(const Grammar& grammar, std::span<const Token> y);

// Per-(nonterminal, span) log values over the only cells a derivation can
// touch:
//   - local prefix tree nodes derive spans shorter than d anywhere in y;
//   - main chain nodes (and the root) derive suffixes y_i..y_{n-1}.
// Every other cell reads as -inf. Memory is O(m n d).
class SpanChart {
 public:
  SpanChart() = default;
  SpanChart(const Grammar& grammar, int n, double fill = kNegInf);

  int length() const { return n_; }
  int width() const { return d_; }

  // Whether (a, i, j) is stored.
  bool Stored(int a, int i, int j) const;
  double at(int a, int i, int j) const;
  // Caller must check Stored() first.
  double& ref(int a, int i, int j);

 private:
  int n_ = 0;
  int d_ = 1;
  std::vector<int> prefix_slot_;  // -1 for main-chain nodes and V_0
  std::vector<int> suffix_slot_;  // -1 off the main chain
  std::vector<double> prefix_;    // [slot][i][len - 1], len < d
  std::vector<double> suffix_;    // [slot][i]
};

// Inside chart: at(a, i, j) = log P(V_a =>* y_i..y_j).
class InsideChart {
 public:
  InsideChart(SpanChart values, double root) :
      values_(std::move(values)), root_(root) {}

  const SpanChart& values() const { return values_; }
  double at(int a, int i, int j) const { return values_.at(a, i, j); }
  double root_loglik() const { return root_; }
  int length() const { return values_.length(); }

 private:
  SpanChart values_;
  double root_;
};

// Specialized CYK inside pass in log space. Throws std::invalid_argument
// for invalid tokens or a degenerate grammar.
InsideChart Inside(const Grammar& grammar, const RuleTable& table,
                   std::span<const Token> y);

// log P(V_1 =>* y); -inf when y has no derivation.
double LogLikelihood(const Grammar& grammar, const RuleTable& table,
                     std::span<const Token> y);

}  // namespace rhpcfg

#endif  // RHPCFG_CHART_H_
