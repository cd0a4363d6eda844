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

#include "rhpcfg/train.h"

#include <cmath>
#include <stdexcept>

#include "chart_terms.h"
#include "rhpcfg/errors.h"

namespace rhpcfg {

namespace {

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Emission and child logit gradients shared by both scorers:
//   d/d emit_logit(i, a) = E[emit(i, a)] - P(a | V_i) E[uses of V_i]
//   d/d child_logit(i, p) = E[child(i, p)] - P(p | V_i) E[ternary uses]
struct LogitGradients {
  std::vector<std::vector<double>> emit;   // [i][a], row 0 empty
  std::vector<std::vector<double>> child;  // [i][p]
};

LogitGradients LogitGrads(const Grammar& grammar, const RuleTable& table,
                          const ExpectedCounts& c) {
  const int m = grammar.num_nonterminals();
  LogitGradients g;
  g.emit.resize(m);
  g.child.resize(m);
  for (int i = 1; i < m; ++i) {
    const double uses = c.unary[i] + c.ternary[i];
    g.emit[i].resize(grammar.vocab_size());
    for (int a = 0; a < grammar.vocab_size(); ++a) {
      g.emit[i][a] = c.emit[i][a] - std::exp(table.emit[i][a]) * uses;
    }
    const size_t nc = grammar.child_set(i).size();
    g.child[i].assign(nc, 0.0);
    for (size_t p = 0; p < nc; ++p) {
      g.child[i][p] = c.child[i][p] - std::exp(table.child[i][p]) * c.ternary[i];
    }
  }
  return g;
}

}  // namespace

OutsideChart Outside(const Grammar& grammar, const RuleTable& table,
                     std::span<const Token> y, const InsideChart& inside) {
  const int n = static_cast<int>(y.size());
  if (inside.root_loglik() == kNegInf) {
    throw UnderivableError("outside: sentence has no derivation");
  }
  SpanChart outside(grammar, n);
  outside.ref(1, 0, n - 1) = 0.0;
  internal::ForEachCellTopDown(grammar, outside, [&](int a, int i, int j) {
    const double ctx = outside.at(a, i, j);
    if (ctx == kNegInf || i == j || inside.at(a, i, j) == kNegInf) return;
    const auto& cs = grammar.child_set(a);
    internal::ForEachTerm(
        grammar, table, y, inside.values(), a, i, j,
        [&](int k, int p, double rule, double l, double r) {
          const double base = ctx + rule;
          if (k > i) {
            double& left = outside.ref(cs[p].left, i, k - 1);
            left = LogAdd(left, base + r);
          }
          double& right = outside.ref(cs[p].right, k + 1, j);
          right = LogAdd(right, base + l);
        });
  });
  return OutsideChart(std::move(outside));
}

ExpectedCounts ExpectedCounts::Zeros(const Grammar& grammar) {
  const int m = grammar.num_nonterminals();
  ExpectedCounts c;
  c.emit.assign(m, std::vector<double>(grammar.vocab_size(), 0.0));
  c.child.resize(m);
  for (int i = 0; i < m; ++i) c.child[i].assign(grammar.child_set(i).size(), 0.0);
  c.unary.assign(m, 0.0);
  c.ternary.assign(m, 0.0);
  return c;
}

void ExpectedCounts::Add(const ExpectedCounts& o) {
  for (size_t i = 0; i < emit.size(); ++i) {
    for (size_t a = 0; a < emit[i].size(); ++a) emit[i][a] += o.emit[i][a];
    for (size_t p = 0; p < child[i].size(); ++p) child[i][p] += o.child[i][p];
    unary[i] += o.unary[i];
    ternary[i] += o.ternary[i];
  }
  loglik += o.loglik;
}

ExpectedCounts ComputeExpectedCounts(const Grammar& grammar,
                                     const RuleTable& table,
                                     std::span<const Token> y) {
  const InsideChart inside = Inside(grammar, table, y);
  const double z = inside.root_loglik();
  const OutsideChart outside = Outside(grammar, table, y, inside);
  ExpectedCounts c = ExpectedCounts::Zeros(grammar);
  c.loglik = z;
  internal::ForEachCellBottomUp(grammar, inside.values(), [&](int a, int i,
                                                             int j) {
    const double ctx = outside.at(a, i, j);
    if (ctx == kNegInf || inside.at(a, i, j) == kNegInf) return;
    if (i == j) {
      const double post =
          std::exp(ctx + internal::UnaryTerm(grammar, table, y, a, i) - z);
      c.unary[a] += post;
      c.emit[a][y[i]] += post;
      return;
    }
    internal::ForEachTerm(grammar, table, y, inside.values(), a, i, j,
                          [&](int k, int p, double rule, double l, double r) {
                            const double post = std::exp(ctx + rule + l + r - z);
                            c.child[a][p] += post;
                            c.emit[a][y[k]] += post;
                            c.ternary[a] += post;
                          });
  });
  return c;
}

ExpectedCounts CorpusCounts(const Grammar& grammar, const RuleTable& table,
                            std::span<const Sentence> corpus) {
  ExpectedCounts total = ExpectedCounts::Zeros(grammar);
  for (size_t s = 0; s < corpus.size(); ++s) {
    if (LogLikelihood(grammar, table, corpus[s]) == kNegInf) {
      throw UnderivableError("sentence has no derivation", s);
    }
    total.Add(ComputeExpectedCounts(grammar, table, corpus[s]));
  }
  return total;
}

double CorpusLogLikelihood(const Grammar& grammar, const Scorer& scorer,
                           std::span<const Sentence> corpus) {
  const RuleTable table = MakeRuleTable(grammar, scorer);
  double total = 0.0;
  for (size_t s = 0; s < corpus.size(); ++s) {
    const double ll = LogLikelihood(grammar, table, corpus[s]);
    if (ll == kNegInf) throw UnderivableError("sentence has no derivation", s);
    total += ll;
  }
  return total;
}

TabularGradient LogLikGradient(const Grammar& grammar, const TabularScorer& s,
                               std::span<const Sentence> corpus,
                               double* loglik) {
  const RuleTable table = RuleTableFromTabular(grammar, s);
  const ExpectedCounts c = CorpusCounts(grammar, table, corpus);
  if (loglik) *loglik = c.loglik;
  LogitGradients lg = LogitGrads(grammar, table, c);
  const int m = grammar.num_nonterminals();
  TabularGradient g;
  g.emit_logits.assign(lg.emit.begin() + 1, lg.emit.end());
  g.child_logits = std::move(lg.child);
  g.rho_logit.assign(m, 0.0);
  for (int i = 1; i < m; ++i) {
    if (FamiliesOf(grammar, i).both()) {
      g.rho_logit[i] = c.unary[i] * (1.0 - s.rho[i]) - c.ternary[i] * s.rho[i];
    }
  }
  return g;
}

TrilinearGradient LogLikGradient(const Grammar& grammar,
                                 const TrilinearScorer& s,
                                 std::span<const Sentence> corpus,
                                 double* loglik) {
  const RuleTable table = RuleTableFromTrilinear(grammar, s);
  const ExpectedCounts c = CorpusCounts(grammar, table, corpus);
  if (loglik) *loglik = c.loglik;
  const LogitGradients lg = LogitGrads(grammar, table, c);

  const int m = grammar.num_nonterminals();
  const long hd = s.hidden_dim();
  const Eigen::MatrixXd q = s.w_q * s.h;
  const Eigen::MatrixXd ql = s.w_l * s.h;
  const Eigen::MatrixXd qr = s.w_r * s.h;

  // Gradients with respect to the emission logits W_o h_i and to the
  // projected vectors q, q_l, q_r (one column per nonterminal).
  Eigen::MatrixXd g_logits = Eigen::MatrixXd::Zero(grammar.vocab_size(), m);
  Eigen::MatrixXd g_q = Eigen::MatrixXd::Zero(hd, m);
  Eigen::MatrixXd g_ql = Eigen::MatrixXd::Zero(hd, m);
  Eigen::MatrixXd g_qr = Eigen::MatrixXd::Zero(hd, m);
  for (int i = 1; i < m; ++i) {
    for (int a = 0; a < grammar.vocab_size(); ++a) g_logits(a, i) = lg.emit[i][a];
    const auto& cs = grammar.child_set(i);
    for (size_t p = 0; p < cs.size(); ++p) {
      const double gs = lg.child[i][p];
      if (gs == 0.0) continue;
      const int j = cs[p].left, k = cs[p].right;
      g_q.col(i) += gs * (ql.col(j) + qr.col(k));
      g_ql.col(j) += gs * (q.col(i) + qr.col(k));
      g_qr.col(k) += gs * (q.col(i) + ql.col(j));
    }
  }

  TrilinearGradient g;
  g.w_out = g_logits * s.h.transpose();
  g.w_q = g_q * s.h.transpose();
  g.w_l = g_ql * s.h.transpose();
  g.w_r = g_qr * s.h.transpose();
  g.h = s.w_out.transpose() * g_logits + s.w_q.transpose() * g_q +
        s.w_l.transpose() * g_ql + s.w_r.transpose() * g_qr;
  return g;
}

EmStepResult EmStep(const Grammar& grammar, const TabularScorer& s,
                    std::span<const Sentence> corpus, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("em: kappa must be > 0");
  const RuleTable table = RuleTableFromTabular(grammar, s);
  const ExpectedCounts c = CorpusCounts(grammar, table, corpus);
  EmStepResult out{s, c.loglik};
  const int m = grammar.num_nonterminals();
  for (int i = 1; i < m; ++i) {
    for (int a = 0; a < grammar.vocab_size(); ++a) {
      out.scorer.emit_logits[i - 1][a] = std::log(c.emit[i][a] + kappa);
    }
    for (size_t p = 0; p < c.child[i].size(); ++p) {
      out.scorer.child_logits[i][p] = std::log(c.child[i][p] + kappa);
    }
    if (FamiliesOf(grammar, i).both()) {
      out.scorer.rho[i] =
          (c.unary[i] + kappa) / (c.unary[i] + c.ternary[i] + 2.0 * kappa);
    }
  }
  return out;
}

std::string ToString(TrainAlgo a) { return a == TrainAlgo::kEm ? "em" : "sgd"; }

TrainAlgo ParseTrainAlgo(const std::string& s) {
  if (s == "em") return TrainAlgo::kEm;
  if (s == "sgd") return TrainAlgo::kSgd;
  throw std::invalid_argument("unknown training algorithm '" + s + "'");
}

namespace {

void Step(TabularScorer& s, const TabularGradient& g, double step) {
  for (size_t r = 0; r < s.emit_logits.size(); ++r) {
    for (size_t a = 0; a < s.emit_logits[r].size(); ++a) {
      s.emit_logits[r][a] += step * g.emit_logits[r][a];
    }
  }
  for (size_t i = 0; i < s.child_logits.size(); ++i) {
    for (size_t p = 0; p < s.child_logits[i].size(); ++p) {
      s.child_logits[i][p] += step * g.child_logits[i][p];
    }
  }
  for (size_t i = 0; i < s.rho.size(); ++i) {
    if (g.rho_logit[i] == 0.0) continue;
    const double logit = std::log(s.rho[i]) - std::log1p(-s.rho[i]);
    s.rho[i] = Sigmoid(logit + step * g.rho_logit[i]);
  }
}

void Step(TrilinearScorer& s, const TrilinearGradient& g, double step) {
  s.h += step * g.h;
  s.w_out += step * g.w_out;
  s.w_q += step * g.w_q;
  s.w_l += step * g.w_l;
  s.w_r += step * g.w_r;
}

}  // namespace

TrainResult Train(const Grammar& grammar, const Scorer& scorer,
                  std::span<const Sentence> corpus, const TrainOptions& opts) {
  if (opts.iters < 0) throw std::invalid_argument("train: iters must be >= 0");
  if (opts.algo == TrainAlgo::kEm &&
      !std::holds_alternative<TabularScorer>(scorer)) {
    throw std::invalid_argument("train: em requires the tabular scorer");
  }
  if (corpus.empty()) throw std::invalid_argument("train: empty corpus");
  TrainResult out{scorer, {}};
  const double step = opts.lr / static_cast<double>(corpus.size());
  for (int t = 0; t < opts.iters; ++t) {
    if (opts.algo == TrainAlgo::kEm) {
      EmStepResult r = EmStep(grammar, std::get<TabularScorer>(out.scorer),
                              corpus, opts.kappa);
      out.trace.push_back(r.loglik_before);
      out.scorer = std::move(r.scorer);
      continue;
    }
    std::visit(
        [&](auto& s) {
          double ll = 0.0;
          const auto g = LogLikGradient(grammar, s, corpus, &ll);
          out.trace.push_back(ll);
          Step(s, g, step);
        },
        out.scorer);
  }
  out.trace.push_back(CorpusLogLikelihood(grammar, out.scorer, corpus));
  return out;
}

}  // namespace rhpcfg
