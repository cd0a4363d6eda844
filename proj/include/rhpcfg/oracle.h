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

#ifndef RHPCFG_ORACLE_H_
#define RHPCFG_ORACLE_H_

// Brute-force ground truth by exhaustive enumeration of derivations. Shares
// no dynamic-programming code with the chart, decode or train modules; it
// only reads the grammar predicates and the rule table.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rhpcfg/parse_tree.h"

namespace rhpcfg {

inline constexpr uint64_t kDefaultTreeCap = 2'000'000;

struct LengthBest {
  double log_prob = 0.0;
  size_t tree = 0;  // index into Enumeration::trees
};

struct Enumeration {
  // Every derivation of positive probability, each with yield and log_prob.
  std::vector<ParseTree> trees;
  // Total log-probability per yield.
  std::map<std::vector<Token>, double> by_string;
  // Best tree per yield length; the first tree in enumeration order wins ties.
  std::map<int, LengthBest> by_length;
};

// Number of positive-probability derivations from V_1, saturating at
// cap + 1.
uint64_t CountTrees(const Grammar& grammar, const RuleTable& table,
                    uint64_t cap = kDefaultTreeCap);

// Throws std::invalid_argument for a degenerate grammar or when the
// predicted count exceeds cap.
Enumeration EnumerateAll(const Grammar& grammar, const RuleTable& table,
                         uint64_t cap = kDefaultTreeCap);

// log P(y); -inf when no tree yields y.
double BruteLogLik(const Enumeration& e, std::span<const Token> y);
// Throws std::invalid_argument when no tree yields y.
const ParseTree& BruteBestParse(const Enumeration& e, std::span<const Token> y);
// Best log-probability over trees with |yield| == length, -inf if none.
double BruteViterbi(const Enumeration& e, int length);
// Best log-probability among the trees that yield exactly y.
double BruteBestLogProb(const Enumeration& e, std::span<const Token> y);

// posterior[i][j] = P(some node spans y_i..y_j | y).
std::vector<std::vector<double>> BruteSpanPosteriors(const Enumeration& e,
                                                     std::span<const Token> y);

// Posterior expected rule usage for y, by summing over the trees of y.
struct BruteCounts {
  std::vector<std::vector<double>> emit;
  std::vector<std::vector<double>> child;
  std::vector<double> unary;
  std::vector<double> ternary;
};
BruteCounts BruteExpectedCounts(const Grammar& grammar, const Enumeration& e,
                                std::span<const Token> y);

}  // namespace rhpcfg

#endif  // RHPCFG_ORACLE_H_
