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

#include "rhpcfg/rule_table.h"

#include <cmath>
#include <stdexcept>

#include "rhpcfg/log_space.h"
#include "rhpcfg/random.h"

namespace rhpcfg {

namespace {

void LogSoftmaxInPlace(std::vector<double>& v) {
  const double z = LogSumExp(v);
  for (double& x : v) x -= z;
}

// Log-softmax over the productive pairs only; the others get -inf. When no
// pair is productive the whole row is normalized (the ternary family is
// disabled then, so the row never contributes).
std::vector<double> NormalizeChildren(const Grammar& grammar, int i,
                                      std::vector<double> scores) {
  const auto& cs = grammar.child_set(i);
  bool any = false;
  for (const ChildPair& p : cs) any = any || grammar.productive(p);
  if (any) {
    for (size_t t = 0; t < cs.size(); ++t) {
      if (!grammar.productive(cs[t])) scores[t] = kNegInf;
    }
  }
  LogSoftmaxInPlace(scores);
  return scores;
}

void CheckFinite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string("scorer: non-finite entry in ") +
                                what);
  }
}

void CheckRho(const Grammar& grammar, const std::vector<double>& rho) {
  if (static_cast<int>(rho.size()) != grammar.num_nonterminals()) {
    throw std::invalid_argument("scorer: rho has " +
                                std::to_string(rho.size()) + " entries, need " +
                                std::to_string(grammar.num_nonterminals()));
  }
  for (double r : rho) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("scorer: rho outside [0, 1]");
    }
  }
}

void CheckMatrix(const Eigen::MatrixXd& x, long rows, long cols,
                 const char* what) {
  if (x.rows() != rows || x.cols() != cols) {
    throw std::invalid_argument(std::string("scorer: ") + what + " is " +
                                std::to_string(x.rows()) + "x" +
                                std::to_string(x.cols()) + ", need " +
                                std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
  if (!x.allFinite()) {
    throw std::invalid_argument(std::string("scorer: non-finite entry in ") +
                                what);
  }
}

RuleTable EmptyTable(const Grammar& grammar) {
  const int m = grammar.num_nonterminals();
  RuleTable t;
  t.vocab_size = grammar.vocab_size();
  t.emit.resize(m);
  t.child.resize(m);
  t.unary_weight.assign(m, kNegInf);
  t.ternary_weight.assign(m, kNegInf);
  return t;
}

}  // namespace

RuleFamilies FamiliesOf(const Grammar& grammar, int i) {
  RuleFamilies f;
  if (i == 0) return f;
  f.unary = grammar.can_emit(i);
  for (const ChildPair& p : grammar.child_set(i)) {
    f.ternary = f.ternary || grammar.productive(p);
  }
  return f;
}

std::pair<double, double> FamilyWeights(const Grammar& grammar, int i,
                                        double rho) {
  const RuleFamilies f = FamiliesOf(grammar, i);
  if (f.both()) return {SafeLog(rho), SafeLog(1.0 - rho)};
  return {f.unary ? 0.0 : kNegInf, f.ternary ? 0.0 : kNegInf};
}

std::string ScorerKind(const Scorer& s) {
  return std::holds_alternative<TabularScorer>(s) ? "tabular" : "trilinear";
}

TabularScorer TabularScorer::Uniform(const Grammar& grammar) {
  const int m = grammar.num_nonterminals();
  TabularScorer s;
  s.emit_logits.assign(m - 1, std::vector<double>(grammar.vocab_size(), 0.0));
  s.child_logits.resize(m);
  for (int i = 0; i < m; ++i) {
    s.child_logits[i].assign(grammar.child_set(i).size(), 0.0);
  }
  s.rho.assign(m, 0.5);
  return s;
}

TabularScorer TabularScorer::Random(const Grammar& grammar, uint64_t seed,
                                    double scale) {
  TabularScorer s = Uniform(grammar);
  Rng rng(seed);
  for (auto& row : s.emit_logits) {
    for (double& x : row) x = rng.Normal(0.0, scale);
  }
  for (auto& row : s.child_logits) {
    for (double& x : row) x = rng.Normal(0.0, scale);
  }
  return s;
}

TrilinearScorer TrilinearScorer::Zeros(const Grammar& grammar,
                                       int hidden_dim) {
  if (hidden_dim < 1) {
    throw std::invalid_argument("trilinear scorer: hidden_dim must be >= 1");
  }
  const int m = grammar.num_nonterminals();
  TrilinearScorer s;
  s.h = Eigen::MatrixXd::Zero(hidden_dim, m);
  s.w_out = Eigen::MatrixXd::Zero(grammar.vocab_size(), hidden_dim);
  s.w_q = Eigen::MatrixXd::Zero(hidden_dim, hidden_dim);
  s.w_l = Eigen::MatrixXd::Zero(hidden_dim, hidden_dim);
  s.w_r = Eigen::MatrixXd::Zero(hidden_dim, hidden_dim);
  s.rho.assign(m, 0.5);
  return s;
}

TrilinearScorer TrilinearScorer::Random(const Grammar& grammar, int hidden_dim,
                                        uint64_t seed, double scale) {
  TrilinearScorer s = Zeros(grammar, hidden_dim);
  Rng rng(seed);
  for (Eigen::MatrixXd* x : {&s.h, &s.w_out, &s.w_q, &s.w_l, &s.w_r}) {
    // Column-major fill order is part of the determinism contract.
    for (Eigen::Index c = 0; c < x->cols(); ++c) {
      for (Eigen::Index r = 0; r < x->rows(); ++r) {
        (*x)(r, c) = rng.Normal(0.0, scale);
      }
    }
  }
  return s;
}

void CheckScorer(const Grammar& grammar, const TabularScorer& s) {
  const int m = grammar.num_nonterminals();
  if (static_cast<int>(s.emit_logits.size()) != m - 1) {
    throw std::invalid_argument("tabular scorer: need " +
                                std::to_string(m - 1) + " emission rows, got " +
                                std::to_string(s.emit_logits.size()));
  }
  for (const auto& row : s.emit_logits) {
    if (static_cast<int>(row.size()) != grammar.vocab_size()) {
      throw std::invalid_argument(
          "tabular scorer: emission row width != vocab_size");
    }
    for (double x : row) CheckFinite(x, "emission logits");
  }
  if (static_cast<int>(s.child_logits.size()) != m) {
    throw std::invalid_argument("tabular scorer: need " + std::to_string(m) +
                                " child rows");
  }
  for (int i = 0; i < m; ++i) {
    if (s.child_logits[i].size() != grammar.child_set(i).size()) {
      throw std::invalid_argument("tabular scorer: child row " +
                                  std::to_string(i) +
                                  " does not match child_set size");
    }
    for (double x : s.child_logits[i]) CheckFinite(x, "child logits");
  }
  CheckRho(grammar, s.rho);
}

void CheckScorer(const Grammar& grammar, const TrilinearScorer& s) {
  const long hd = s.h.rows();
  if (hd < 1) throw std::invalid_argument("trilinear scorer: H must be >= 1");
  CheckMatrix(s.h, hd, grammar.num_nonterminals(), "h");
  CheckMatrix(s.w_out, grammar.vocab_size(), hd, "W_o");
  CheckMatrix(s.w_q, hd, hd, "W_q");
  CheckMatrix(s.w_l, hd, hd, "W_l");
  CheckMatrix(s.w_r, hd, hd, "W_r");
  CheckRho(grammar, s.rho);
}

double TrilinearChildScore(const TrilinearScorer& s, int i, int j, int k) {
  const Eigen::VectorXd qi = s.w_q * s.h.col(i);
  const Eigen::VectorXd qj = s.w_l * s.h.col(j);
  const Eigen::VectorXd qk = s.w_r * s.h.col(k);
  return qi.dot(qj) + qi.dot(qk) + qj.dot(qk);
}

RuleTable RuleTableFromTabular(const Grammar& grammar, const TabularScorer& s) {
  CheckScorer(grammar, s);
  RuleTable t = EmptyTable(grammar);
  for (int i = 1; i < grammar.num_nonterminals(); ++i) {
    t.emit[i] = s.emit_logits[i - 1];
    LogSoftmaxInPlace(t.emit[i]);
    if (!grammar.child_set(i).empty()) {
      t.child[i] = NormalizeChildren(grammar, i, s.child_logits[i]);
    }
    std::tie(t.unary_weight[i], t.ternary_weight[i]) =
        FamilyWeights(grammar, i, s.rho[i]);
  }
  return t;
}

RuleTable RuleTableFromTrilinear(const Grammar& grammar,
                                 const TrilinearScorer& s) {
  CheckScorer(grammar, s);
  RuleTable t = EmptyTable(grammar);
  const Eigen::MatrixXd logits = s.w_out * s.h;
  const Eigen::MatrixXd q = s.w_q * s.h;
  const Eigen::MatrixXd ql = s.w_l * s.h;
  const Eigen::MatrixXd qr = s.w_r * s.h;
  for (int i = 1; i < grammar.num_nonterminals(); ++i) {
    t.emit[i].resize(grammar.vocab_size());
    for (int a = 0; a < grammar.vocab_size(); ++a) t.emit[i][a] = logits(a, i);
    LogSoftmaxInPlace(t.emit[i]);
    const auto& cs = grammar.child_set(i);
    if (!cs.empty()) {
      std::vector<double> scores(cs.size());
      for (size_t p = 0; p < cs.size(); ++p) {
        const auto qj = ql.col(cs[p].left);
        const auto qk = qr.col(cs[p].right);
        scores[p] = q.col(i).dot(qj) + q.col(i).dot(qk) + qj.dot(qk);
      }
      t.child[i] = NormalizeChildren(grammar, i, std::move(scores));
    }
    std::tie(t.unary_weight[i], t.ternary_weight[i]) =
        FamilyWeights(grammar, i, s.rho[i]);
  }
  return t;
}

RuleTable MakeRuleTable(const Grammar& grammar, const Scorer& s) {
  return std::visit(
      [&](const auto& x) -> RuleTable {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TabularScorer>) {
          return RuleTableFromTabular(grammar, x);
        } else {
          return RuleTableFromTrilinear(grammar, x);
        }
      },
      s);
}

}  // namespace rhpcfg
