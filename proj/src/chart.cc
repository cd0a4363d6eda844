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

#include "rhpcfg/chart.h"

#include <stdexcept>
#include <string>

#include "chart_terms.h"

namespace rhpcfg {

void CheckSentence(const Grammar& grammar, std::span<const Token> y) {
  if (y.empty()) throw std::invalid_argument("sentence is empty");
  for (size_t p = 0; p < y.size(); ++p) {
    if (y[p] < 0 || y[p] >= grammar.vocab_size()) {
      throw std::invalid_argument("token " + std::to_string(y[p]) +
                                  " at position " + std::to_string(p) +
                                  " outside vocabulary of size " +
                                  std::to_string(grammar.vocab_size()));
    }
  }
}

SpanChart::SpanChart(const Grammar& grammar, int n, double fill)
    : n_(n), d_(grammar.prefix_width()) {
  const int m = grammar.num_nonterminals();
  prefix_slot_.assign(m, -1);
  suffix_slot_.assign(m, -1);
  int np = 0, ns = 0;
  for (int a = 1; a < m; ++a) {
    if (grammar.tree().is_main_chain(a)) {
      suffix_slot_[a] = ns++;
    } else {
      prefix_slot_[a] = np++;
    }
  }
  if (d_ > 1) {
    prefix_.assign(static_cast<size_t>(np) * n_ * (d_ - 1), fill);
  }
  suffix_.assign(static_cast<size_t>(ns) * n_, fill);
}

bool SpanChart::Stored(int a, int i, int j) const {
  if (a <= 0 || i < 0 || j < i || j >= n_) return false;
  if (suffix_slot_[a] >= 0) return j == n_ - 1;
  return prefix_slot_[a] >= 0 && j - i + 1 < d_;
}

double SpanChart::at(int a, int i, int j) const {
  if (!Stored(a, i, j)) return kNegInf;
  return const_cast<SpanChart*>(this)->ref(a, i, j);
}

double& SpanChart::ref(int a, int i, int j) {
  if (suffix_slot_[a] >= 0) {
    return suffix_[static_cast<size_t>(suffix_slot_[a]) * n_ + i];
  }
  const size_t row = static_cast<size_t>(prefix_slot_[a]) * n_ + i;
  return prefix_[row * (d_ - 1) + (j - i)];
}

InsideChart Inside(const Grammar& grammar, const RuleTable& table,
                   std::span<const Token> y) {
  CheckSentence(grammar, y);
  if (grammar.report().degenerate()) {
    throw std::invalid_argument("inside: grammar is degenerate");
  }
  const int n = static_cast<int>(y.size());
  SpanChart chart(grammar, n);
  std::vector<double> terms;
  internal::ForEachCellBottomUp(grammar, chart, [&](int a, int i, int j) {
    if (i == j) {
      chart.ref(a, i, j) = internal::UnaryTerm(grammar, table, y, a, i);
      return;
    }
    terms.clear();
    internal::ForEachTerm(grammar, table, y, chart, a, i, j,
                          [&](int, int, double rule, double l, double r) {
                            terms.push_back(rule + l + r);
                          });
    chart.ref(a, i, j) = LogSumExp(terms);
  });
  const double root = chart.at(1, 0, n - 1);
  return InsideChart(std::move(chart), root);
}

double LogLikelihood(const Grammar& grammar, const RuleTable& table,
                     std::span<const Token> y) {
  return Inside(grammar, table, y).root_loglik();
}

}  // namespace rhpcfg
