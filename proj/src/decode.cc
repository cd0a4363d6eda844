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

#include "rhpcfg/decode.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "chart_terms.h"
#include "rhpcfg/errors.h"

namespace rhpcfg {

namespace {

SpanChart MaxChart(const Grammar& grammar, const RuleTable& table,
                   std::span<const Token> y) {
  SpanChart chart(grammar, static_cast<int>(y.size()));
  internal::ForEachCellBottomUp(grammar, chart, [&](int a, int i, int j) {
    if (i == j) {
      chart.ref(a, i, j) = internal::UnaryTerm(grammar, table, y, a, i);
      return;
    }
    double best = kNegInf;
    internal::ForEachTerm(grammar, table, y, chart, a, i, j,
                          [&](int, int, double rule, double l, double r) {
                            best = std::max(best, rule + l + r);
                          });
    chart.ref(a, i, j) = best;
  });
  return chart;
}

}  // namespace

ParseTree BestParse(const Grammar& grammar, const RuleTable& table,
                    std::span<const Token> y) {
  CheckSentence(grammar, y);
  if (grammar.report().degenerate()) {
    throw UnderivableError("best parse: grammar is degenerate");
  }
  const int n = static_cast<int>(y.size());
  const SpanChart chart = MaxChart(grammar, table, y);
  ParseTree tree;
  tree.log_prob = chart.at(1, 0, n - 1);
  if (tree.log_prob == kNegInf) {
    throw UnderivableError("best parse: sentence has no derivation");
  }

  // Re-derive each argmax from the finished chart; the first maximal term in
  // visiting order wins.
  std::function<int(int, int, int)> build = [&](int a, int i, int j) -> int {
    const int self = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(ParseNode{a, std::nullopt, -1, -1});
    if (a == 0) return self;
    if (i == j) {
      tree.nodes[self].token = y[i];
      return self;
    }
    double best = kNegInf;
    int best_k = -1, best_p = -1;
    internal::ForEachTerm(grammar, table, y, chart, a, i, j,
                          [&](int k, int p, double rule, double l, double r) {
                            const double v = rule + l + r;
                            if (v > best) {
                              best = v;
                              best_k = k;
                              best_p = p;
                            }
                          });
    const ChildPair& pair = grammar.child_set(a)[best_p];
    tree.nodes[self].token = y[best_k];
    const int l = build(pair.left, i, best_k - 1);
    const int r = build(pair.right, best_k + 1, j);
    tree.nodes[self].left = l;
    tree.nodes[self].right = r;
    return self;
  };
  build(1, 0, n - 1);
  ComputeYield(tree);
  return tree;
}

double MaxTreeRatio(const Grammar& grammar, const RuleTable& table,
                    std::span<const Token> y) {
  const double total = LogLikelihood(grammar, table, y);
  if (total == kNegInf) {
    throw UnderivableError("max tree ratio: sentence has no derivation");
  }
  const ParseTree best = BestParse(grammar, table, y);
  return std::min(1.0, std::exp(best.log_prob - total));
}

ViterbiTables BuildViterbiTables(const Grammar& grammar, const RuleTable& table,
                                 int max_length) {
  if (max_length < 1) {
    throw std::invalid_argument("viterbi: max_length must be >= 1");
  }
  const int m = grammar.num_nonterminals();
  const int d = grammar.prefix_width();
  ViterbiTables t;
  t.max_length = max_length;
  t.max_p.assign(m, std::vector<double>(max_length + 1, kNegInf));
  t.back.assign(m, std::vector<ViterbiBack>(max_length + 1));
  t.max_emit.assign(m, kNegInf);
  t.max_emit_token.assign(m, -1);
  t.max_p[0][0] = 0.0;

  for (int a = 1; a < m; ++a) {
    const auto& row = table.emit[a];
    for (Token tok = 0; tok < static_cast<Token>(row.size()); ++tok) {
      if (row[tok] > t.max_emit[a]) {
        t.max_emit[a] = row[tok];
        t.max_emit_token[a] = tok;
      }
    }
    if (grammar.can_emit(a)) {
      t.max_p[a][1] = table.unary_weight[a] + t.max_emit[a];
    }
  }

  for (int len = 2; len <= max_length; ++len) {
    for (int a = 1; a < m; ++a) {
      const auto& cs = grammar.child_set(a);
      const double base = table.ternary_weight[a] + t.max_emit[a];
      if (cs.empty() || base == kNegInf) continue;
      const int boundary = grammar.first_nonempty_left(a);
      double best = kNegInf;
      ViterbiBack arg;
      for (int split = 0; split <= std::min(len - 2, d - 1); ++split) {
        const int p_lo = split == 0 ? 0 : boundary;
        const int p_hi = split == 0 ? boundary : static_cast<int>(cs.size());
        for (int p = p_lo; p < p_hi; ++p) {
          const double v = base + table.child[a][p] +
                           t.max_p[cs[p].left][split] +
                           t.max_p[cs[p].right][len - 1 - split];
          if (v > best) {
            best = v;
            arg = {split, cs[p].left, cs[p].right};
          }
        }
      }
      t.max_p[a][len] = best;
      t.back[a][len] = arg;
    }
  }
  return t;
}

ParseTree DecodeLength(const ViterbiTables& tables, int length) {
  if (tables.at(1, length) == kNegInf) {
    throw UnderivableError("decode: no yield of length " +
                           std::to_string(length));
  }
  ParseTree tree;
  std::function<int(int, int)> build = [&](int a, int len) -> int {
    const int self = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(ParseNode{a, std::nullopt, -1, -1});
    if (a == 0) return self;
    tree.nodes[self].token = tables.max_emit_token[a];
    const ViterbiBack& b = tables.back[a][len];
    if (len == 1) return self;
    const int l = build(b.left, b.split);
    const int r = build(b.right, len - 1 - b.split);
    tree.nodes[self].left = l;
    tree.nodes[self].right = r;
    return self;
  };
  build(1, length);
  tree.log_prob = tables.at(1, length);
  ComputeYield(tree);
  return tree;
}

std::string ToString(Rerank r) {
  return r == Rerank::kRaw ? "raw" : "per_token";
}

Rerank ParseRerank(const std::string& s) {
  if (s == "raw") return Rerank::kRaw;
  if (s == "per_token") return Rerank::kPerToken;
  throw std::invalid_argument("unknown rerank mode '" + s + "'");
}

Candidate Decode(const Grammar& grammar, const RuleTable& table,
                 int min_length, int max_length, Rerank mode) {
  if (min_length < 1 || min_length > max_length) {
    throw std::invalid_argument("decode: need 1 <= min_length <= max_length");
  }
  const ViterbiTables tables = BuildViterbiTables(grammar, table, max_length);
  int best_len = -1;
  double best_score = kNegInf;
  for (int len = min_length; len <= max_length; ++len) {
    const double lp = tables.at(1, len);
    if (lp == kNegInf) continue;
    const double score = mode == Rerank::kRaw ? lp : lp / len;
    if (best_len < 0 || score > best_score) {
      best_len = len;
      best_score = score;
    }
  }
  if (best_len < 0) {
    throw UnderivableError("decode: no derivable length in [" +
                           std::to_string(min_length) + ", " +
                           std::to_string(max_length) + "]");
  }
  return Candidate{best_len, best_score, DecodeLength(tables, best_len)};
}

}  // namespace rhpcfg
