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

#ifndef RHPCFG_TRAIN_H_
#define RHPCFG_TRAIN_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rhpcfg/chart.h"
#include "rhpcfg/rule_table.h"

namespace rhpcfg {

// Outside chart over the same cells as the inside chart: at(a, i, j) is the
// log-probability of all derivation contexts that require V_a to yield
// y_i..y_j, so inside + outside - root is that cell's log posterior.
class OutsideChart {
 public:
  explicit OutsideChart(SpanChart values) : values_(std::move(values)) {}
  const SpanChart& values() const { return values_; }
  double at(int a, int i, int j) const { return values_.at(a, i, j); }

 private:
  SpanChart values_;
};

// Throws UnderivableError when the inside chart's root is -inf.
OutsideChart Outside(const Grammar& grammar, const RuleTable& table,
                     std::span<const Token> y, const InsideChart& inside);

// Posterior expected rule usage.
struct ExpectedCounts {
  std::vector<std::vector<double>> emit;   // [i][token], parent tokens too
  std::vector<std::vector<double>> child;  // aligned with child_set(i)
  std::vector<double> unary;               // uses of V_i -> a
  std::vector<double> ternary;             // uses of V_i -> V_j a V_k
  double loglik = 0.0;

  static ExpectedCounts Zeros(const Grammar& grammar);
  void Add(const ExpectedCounts& other);
};

ExpectedCounts ComputeExpectedCounts(const Grammar& grammar,
                                     const RuleTable& table,
                                     std::span<const Token> y);

// Counts summed over the corpus in corpus order; the UnderivableError names
// the first sentence without a derivation.
ExpectedCounts CorpusCounts(const Grammar& grammar, const RuleTable& table,
                            std::span<const Sentence> corpus);

double CorpusLogLikelihood(const Grammar& grammar, const Scorer& scorer,
                           std::span<const Sentence> corpus);

// d log P(corpus) with respect to each parameter block. The unary share rho_i
// is differentiated through its logit, log(rho_i / (1 - rho_i)).
struct TabularGradient {
  std::vector<std::vector<double>> emit_logits;
  std::vector<std::vector<double>> child_logits;
  std::vector<double> rho_logit;
};

struct TrilinearGradient {
  Eigen::MatrixXd h;
  Eigen::MatrixXd w_out;
  Eigen::MatrixXd w_q;
  Eigen::MatrixXd w_l;
  Eigen::MatrixXd w_r;
};

TabularGradient LogLikGradient(const Grammar& grammar, const TabularScorer& s,
                               std::span<const Sentence> corpus,
                               double* loglik = nullptr);
TrilinearGradient LogLikGradient(const Grammar& grammar,
                                 const TrilinearScorer& s,
                                 std::span<const Sentence> corpus,
                                 double* loglik = nullptr);

inline constexpr double kDefaultSmoothing = 1e-6;

struct EmStepResult {
  TabularScorer scorer;
  double loglik_before = 0.0;
};

// Exact M-step: logits become log(count + kappa) per normalization group and
// rho_i = (unary + kappa) / (unary + ternary + 2 kappa).
EmStepResult EmStep(const Grammar& grammar, const TabularScorer& s,
                    std::span<const Sentence> corpus,
                    double kappa = kDefaultSmoothing);

enum class TrainAlgo { kEm, kSgd };

std::string ToString(TrainAlgo a);
TrainAlgo ParseTrainAlgo(const std::string& s);

struct TrainOptions {
  TrainAlgo algo = TrainAlgo::kEm;
  int iters = 20;
  double lr = 1e-2;  // step on the mean per-sentence gradient
  double kappa = kDefaultSmoothing;
};

struct TrainResult {
  Scorer scorer;
  // trace[t] is the corpus log-likelihood after t updates; iters + 1 entries.
  std::vector<double> trace;
};

// Throws std::invalid_argument for EM on a trilinear scorer.
TrainResult Train(const Grammar& grammar, const Scorer& scorer,
                  std::span<const Sentence> corpus, const TrainOptions& opts);

}  // namespace rhpcfg

#endif  // RHPCFG_TRAIN_H_
