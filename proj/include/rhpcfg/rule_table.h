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

#ifndef RHPCFG_RULE_TABLE_H_
#define RHPCFG_RULE_TABLE_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rhpcfg/grammar.h"

namespace rhpcfg {

// Normalized rule log-probabilities for one grammar.
//
// The probability mass of V_i is split between the unary family (V_i -> a)
// and the ternary family (V_i -> V_j a V_k) by the mixing weight rho_i:
//
//   P(V_i -> a)         = u_i * P(a | V_i)
//   P(V_i -> V_j a V_k) = t_i * P(<V_j, V_k> | V_i) * P(a | V_i)
//
// with (u_i, t_i) = (rho_i, 1 - rho_i) when both families exist, and 1 for
// the only family otherwise. A ternary pair counts as existing only when both
// of its children can terminate; pairs that cannot are given -inf so every
// derivation ends.
struct RuleTable {
  int vocab_size = 0;
  // log P(a | V_i); row 0 is empty.
  std::vector<std::vector<double>> emit;
  // log P(<V_j, V_k> | V_i), aligned with Grammar::child_set(i).
  std::vector<std::vector<double>> child;
  // log u_i and log t_i.
  std::vector<double> unary_weight;
  std::vector<double> ternary_weight;

  int num_nonterminals() const { return static_cast<int>(emit.size()); }

  double UnaryLogProb(int i, Token a) const {
    return unary_weight[i] + emit[i][a];
  }
  double TernaryLogProb(int i, int pair, Token a) const {
    return ternary_weight[i] + child[i][pair] + emit[i][a];
  }
};

// Direct logits; desk-scale stand-in for decoder hidden states.
struct TabularScorer {
  // Row r holds the emission logits of nonterminal r + 1.
  std::vector<std::vector<double>> emit_logits;
  // Row i aligned with child_set(i); row 0 empty.
  std::vector<std::vector<double>> child_logits;
  // Unary share per nonterminal; entry 0 unused.
  std::vector<double> rho;

  static TabularScorer Uniform(const Grammar& grammar);
  // Logits drawn from N(0, scale^2), rho = 0.5.
  static TabularScorer Random(const Grammar& grammar, uint64_t seed,
                              double scale);

  bool operator==(const TabularScorer&) const = default;
};

// Trilinear parameterization:
//   emission logits  W_o h_i
//   child score      q_i.q_j + q_i.q_k + q_j.q_k,
//                    q_i = W_q h_i, q_j = W_l h_j, q_k = W_r h_k
struct TrilinearScorer {
  Eigen::MatrixXd h;      // H x m, column i is the embedding of V_i
  Eigen::MatrixXd w_out;  // vocab x H
  Eigen::MatrixXd w_q;    // H x H
  Eigen::MatrixXd w_l;    // H x H
  Eigen::MatrixXd w_r;    // H x H
  std::vector<double> rho;

  int hidden_dim() const { return static_cast<int>(h.rows()); }

  static TrilinearScorer Zeros(const Grammar& grammar, int hidden_dim);
  static TrilinearScorer Random(const Grammar& grammar, int hidden_dim,
                                uint64_t seed, double scale);

  bool operator==(const TrilinearScorer& o) const {
    return h == o.h && w_out == o.w_out && w_q == o.w_q && w_l == o.w_l &&
           w_r == o.w_r && rho == o.rho;
  }
};

using Scorer = std::variant<TabularScorer, TrilinearScorer>;

std::string ScorerKind(const Scorer& s);

// Throws std::invalid_argument when shapes disagree with the grammar or an
// entry is not finite.
void CheckScorer(const Grammar& grammar, const TabularScorer& s);
void CheckScorer(const Grammar& grammar, const TrilinearScorer& s);

double TrilinearChildScore(const TrilinearScorer& s, int i, int j, int k);

RuleTable RuleTableFromTabular(const Grammar& grammar, const TabularScorer& s);
RuleTable RuleTableFromTrilinear(const Grammar& grammar,
                                 const TrilinearScorer& s);
RuleTable MakeRuleTable(const Grammar& grammar, const Scorer& s);

// Which rule families V_i has: unary needs emission rights, ternary needs a
// productive child pair.
struct RuleFamilies {
  bool unary = false;
  bool ternary = false;
  bool both() const { return unary && ternary; }
};
RuleFamilies FamiliesOf(const Grammar& grammar, int i);

// (log u_i, log t_i) for a given rho_i.
std::pair<double, double> FamilyWeights(const Grammar& grammar, int i,
                                        double rho);

}  // namespace rhpcfg

#endif  // RHPCFG_RULE_TABLE_H_
