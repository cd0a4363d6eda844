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

#ifndef RHPCFG_DECODE_H_
#define RHPCFG_DECODE_H_

#include <span>
#include <string>
#include <vector>

#include "rhpcfg/chart.h"
#include "rhpcfg/parse_tree.h"

namespace rhpcfg {

// Most probable derivation of y (max-product CYK). Ties go to the smallest
// split, then child_set order. Throws UnderivableError when y has no
// derivation.
ParseTree BestParse(const Grammar& grammar, const RuleTable& table,
                    std::span<const Token> y);

// P(y, T*) / P(y), in (0, 1].
double MaxTreeRatio(const Grammar& grammar, const RuleTable& table,
                    std::span<const Token> y);

struct ViterbiBack {
  int split = -1;  // yield length of the left child; -1 for a unary rule
  int left = -1;
  int right = -1;
};

// Length-indexed Viterbi tables. max_p[a][L] is the best log-probability of
// any length-L yield of V_a (L = 0 only for V_0).
struct ViterbiTables {
  int max_length = 0;
  std::vector<std::vector<double>> max_p;
  std::vector<std::vector<ViterbiBack>> back;
  std::vector<double> max_emit;  // max_a log P(a | V_i)
  std::vector<Token> max_emit_token;

  double at(int a, int length) const {
    return length < 0 || length > max_length ? kNegInf : max_p[a][length];
  }
};

ViterbiTables BuildViterbiTables(const Grammar& grammar, const RuleTable& table,
                                 int max_length);

// Follows the backpointers from (V_1, length). Throws UnderivableError if no
// yield of that length exists.
ParseTree DecodeLength(const ViterbiTables& tables, int length);

enum class Rerank { kRaw, kPerToken };

std::string ToString(Rerank r);
Rerank ParseRerank(const std::string& s);

struct Candidate {
  int length = 0;
  double score = 0.0;  // reranking score
  ParseTree tree;      // tree.log_prob == max_p(1, length)
};

// Best candidate over lengths [min_length, max_length]; score is max_p in raw
// mode and max_p / L in per-token mode, ties to the shorter length.
Candidate Decode(const Grammar& grammar, const RuleTable& table,
                 int min_length, int max_length, Rerank mode);

}  // namespace rhpcfg

#endif  // RHPCFG_DECODE_H_
