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

#ifndef RHPCFG_CHART_TERMS_H_
#define RHPCFG_CHART_TERMS_H_

// Shared enumeration of the ternary terms of one chart cell. Used by the
// inside, max-product and outside passes so all three visit terms in the
// same fixed order: ascending split k, then child_set order.

#include <algorithm>
#include <span>

#include "rhpcfg/chart.h"

namespace rhpcfg::internal {

// Calls fn(k, pair, rule, left, right) for every finite term of cell
// (a, i, j), j > i, where rule is the ternary rule log-probability with y_k
// as the parent's token and left/right are the children's chart values.
template <typename Fn>
void ForEachTerm(const Grammar& grammar, const RuleTable& table,
                 std::span<const Token> y, const SpanChart& chart, int a,
                 int i, int j, Fn&& fn) {
  const auto& cs = grammar.child_set(a);
  if (cs.empty() || table.ternary_weight[a] == kNegInf) return;
  const int split = grammar.first_nonempty_left(a);
  const int nc = static_cast<int>(cs.size());
  const int k_end = std::min(j - 1, i + grammar.prefix_width() - 1);
  for (int k = i; k <= k_end; ++k) {
    const double base = table.ternary_weight[a] + table.emit[a][y[k]];
    if (base == kNegInf) continue;
    const bool empty_left = k == i;
    const int p_lo = empty_left ? 0 : split;
    const int p_hi = empty_left ? split : nc;
    for (int p = p_lo; p < p_hi; ++p) {
      const double rule = base + table.child[a][p];
      if (rule == kNegInf) continue;
      const double left = empty_left ? 0.0 : chart.at(cs[p].left, i, k - 1);
      if (left == kNegInf) continue;
      const double right = chart.at(cs[p].right, k + 1, j);
      if (right == kNegInf) continue;
      fn(k, p, rule, left, right);
    }
  }
}

inline double UnaryTerm(const Grammar& grammar, const RuleTable& table,
                        std::span<const Token> y, int a, int i) {
  if (!grammar.can_emit(a)) return kNegInf;
  return table.UnaryLogProb(a, y[i]);
}

// Visits stored cells bottom-up: prefix-tree spans by increasing length,
// then main-chain suffixes by decreasing start. fn(a, i, j).
template <typename Fn>
void ForEachCellBottomUp(const Grammar& grammar, const SpanChart& chart,
                         Fn&& fn) {
  const int n = chart.length();
  const int m = grammar.num_nonterminals();
  const SupportTree& tree = grammar.tree();
  for (int len = 1; len < grammar.prefix_width() && len <= n; ++len) {
    for (int i = 0; i + len <= n; ++i) {
      for (int a = 1; a < m; ++a) {
        if (!tree.is_main_chain(a)) fn(a, i, i + len - 1);
      }
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int a = 1; a < m; ++a) {
      if (tree.is_main_chain(a)) fn(a, i, n - 1);
    }
  }
}

// Reverse of ForEachCellBottomUp: every parent before its children.
template <typename Fn>
void ForEachCellTopDown(const Grammar& grammar, const SpanChart& chart,
                        Fn&& fn) {
  const int n = chart.length();
  const int m = grammar.num_nonterminals();
  const SupportTree& tree = grammar.tree();
  for (int i = 0; i < n; ++i) {
    for (int a = m - 1; a >= 1; --a) {
      if (tree.is_main_chain(a)) fn(a, i, n - 1);
    }
  }
  for (int len = std::min(grammar.prefix_width() - 1, n); len >= 1; --len) {
    for (int i = 0; i + len <= n; ++i) {
      for (int a = m - 1; a >= 1; --a) {
        if (!tree.is_main_chain(a)) fn(a, i, i + len - 1);
      }
    }
  }
}

}  // namespace rhpcfg::internal

#endif  // RHPCFG_CHART_TERMS_H_
