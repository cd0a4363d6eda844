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

#include "rhpcfg/oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "rhpcfg/log_space.h"

namespace rhpcfg {

namespace {

struct Partial {
  std::vector<ParseNode> nodes;  // pre-order, root first
  std::vector<Token> yield;
  double log_prob = 0.0;
};

uint64_t SatAdd(uint64_t a, uint64_t b, uint64_t cap) {
  return std::min(cap + 1, a + b);
}

uint64_t SatMul(uint64_t a, uint64_t b, uint64_t cap) {
  if (a == 0 || b == 0) return 0;
  if (a > (cap + 1) / b + 1) return cap + 1;
  return std::min(cap + 1, a * b);
}

int CountFinite(const std::vector<double>& row) {
  return static_cast<int>(
      std::count_if(row.begin(), row.end(), [](double x) { return x > kNegInf; }));
}

class Enumerator {
 public:
  Enumerator(const Grammar& g, const RuleTable& t) : g_(g), t_(t) {}

  uint64_t Count(int a, uint64_t cap) {
    if (counts_.empty()) counts_.assign(g_.num_nonterminals(), UINT64_MAX);
    if (counts_[a] != UINT64_MAX) return counts_[a];
    uint64_t total = 0;
    if (a == 0) {
      total = 1;
    } else {
      const uint64_t tokens = CountFinite(t_.emit[a]);
      if (g_.can_emit(a) && t_.unary_weight[a] > kNegInf) total = tokens;
      if (t_.ternary_weight[a] > kNegInf) {
        const auto& cs = g_.child_set(a);
        for (size_t p = 0; p < cs.size(); ++p) {
          if (t_.child[a][p] == kNegInf) continue;
          const uint64_t sub = SatMul(Count(cs[p].left, cap),
                                      Count(cs[p].right, cap), cap);
          total = SatAdd(total, SatMul(tokens, sub, cap), cap);
        }
      }
    }
    counts_[a] = total;
    return total;
  }

  const std::vector<Partial>& Expand(int a) {
    if (memo_.empty()) memo_.resize(g_.num_nonterminals());
    if (memo_[a]) return *memo_[a];
    std::vector<Partial> out;
    if (a == 0) {
      out.push_back(Partial{{ParseNode{0, std::nullopt, -1, -1}}, {}, 0.0});
    } else {
      const int vocab = g_.vocab_size();
      if (g_.can_emit(a) && t_.unary_weight[a] > kNegInf) {
        for (Token tok = 0; tok < vocab; ++tok) {
          const double lp = t_.unary_weight[a] + t_.emit[a][tok];
          if (lp == kNegInf) continue;
          out.push_back(Partial{{ParseNode{a, tok, -1, -1}}, {tok}, lp});
        }
      }
      const auto& cs = g_.child_set(a);
      for (size_t p = 0; p < cs.size() && t_.ternary_weight[a] > kNegInf;
           ++p) {
        if (t_.child[a][p] == kNegInf) continue;
        const auto& lefts = Expand(cs[p].left);
        const auto& rights = Expand(cs[p].right);
        for (Token tok = 0; tok < vocab; ++tok) {
          const double rule =
              t_.ternary_weight[a] + t_.child[a][p] + t_.emit[a][tok];
          if (rule == kNegInf) continue;
          for (const Partial& l : lefts) {
            for (const Partial& r : rights) {
              out.push_back(Join(a, tok, rule, l, r));
            }
          }
        }
      }
    }
    memo_[a] = std::move(out);
    return *memo_[a];
  }

 private:
  static Partial Join(int a, Token tok, double rule, const Partial& l,
                      const Partial& r) {
    Partial t;
    const int l_off = 1;
    const int r_off = 1 + static_cast<int>(l.nodes.size());
    t.nodes.reserve(1 + l.nodes.size() + r.nodes.size());
    t.nodes.push_back(ParseNode{a, tok, l_off, r_off});
    for (ParseNode n : l.nodes) {
      if (n.left >= 0) n.left += l_off;
      if (n.right >= 0) n.right += l_off;
      t.nodes.push_back(n);
    }
    for (ParseNode n : r.nodes) {
      if (n.left >= 0) n.left += r_off;
      if (n.right >= 0) n.right += r_off;
      t.nodes.push_back(n);
    }
    t.yield = l.yield;
    t.yield.push_back(tok);
    t.yield.insert(t.yield.end(), r.yield.begin(), r.yield.end());
    t.log_prob = rule + l.log_prob + r.log_prob;
    return t;
  }

  const Grammar& g_;
  const RuleTable& t_;
  std::vector<uint64_t> counts_;
  std::vector<std::optional<std::vector<Partial>>> memo_;
};

// Span (first, last yield position) of every node, by in-order walk.
std::vector<std::pair<int, int>> NodeSpans(const ParseTree& t) {
  std::vector<std::pair<int, int>> spans(t.nodes.size(), {0, -1});
  int pos = 0;
  std::function<void(int)> walk = [&](int v) {
    const int start = pos;
    const ParseNode& n = t.nodes[v];
    if (n.left >= 0) walk(n.left);
    if (n.token) ++pos;
    if (n.right >= 0) walk(n.right);
    spans[v] = {start, pos - 1};
  };
  walk(0);
  return spans;
}

bool YieldIs(const ParseTree& t, std::span<const Token> y) {
  return std::equal(t.yield.begin(), t.yield.end(), y.begin(), y.end());
}

}  // namespace

uint64_t CountTrees(const Grammar& grammar, const RuleTable& table,
                    uint64_t cap) {
  Enumerator e(grammar, table);
  return e.Count(1, cap);
}

Enumeration EnumerateAll(const Grammar& grammar, const RuleTable& table,
                         uint64_t cap) {
  if (grammar.report().degenerate()) {
    throw std::invalid_argument("enumerate: grammar is degenerate");
  }
  Enumerator e(grammar, table);
  const uint64_t predicted = e.Count(1, cap);
  if (predicted > cap) {
    throw std::invalid_argument("enumerate: more than " + std::to_string(cap) +
                                " trees");
  }
  Enumeration out;
  for (const Partial& p : e.Expand(1)) {
    ParseTree t;
    t.nodes = p.nodes;
    t.log_prob = p.log_prob;
    ComputeYield(t);
    const size_t idx = out.trees.size();
    auto [it, fresh] = out.by_string.try_emplace(t.yield, t.log_prob);
    if (!fresh) it->second = LogAdd(it->second, t.log_prob);
    const int len = static_cast<int>(t.yield.size());
    auto lb = out.by_length.find(len);
    if (lb == out.by_length.end()) {
      out.by_length.emplace(len, LengthBest{t.log_prob, idx});
    } else if (t.log_prob > lb->second.log_prob) {
      lb->second = LengthBest{t.log_prob, idx};
    }
    out.trees.push_back(std::move(t));
  }
  return out;
}

double BruteLogLik(const Enumeration& e, std::span<const Token> y) {
  const auto it = e.by_string.find(std::vector<Token>(y.begin(), y.end()));
  return it == e.by_string.end() ? kNegInf : it->second;
}

const ParseTree& BruteBestParse(const Enumeration& e,
                                std::span<const Token> y) {
  const ParseTree* best = nullptr;
  for (const ParseTree& t : e.trees) {
    if (YieldIs(t, y) && (!best || t.log_prob > best->log_prob)) best = &t;
  }
  if (!best) throw std::invalid_argument("oracle: no tree yields sentence");
  return *best;
}

double BruteBestLogProb(const Enumeration& e, std::span<const Token> y) {
  double best = kNegInf;
  for (const ParseTree& t : e.trees) {
    if (YieldIs(t, y)) best = std::max(best, t.log_prob);
  }
  return best;
}

double BruteViterbi(const Enumeration& e, int length) {
  const auto it = e.by_length.find(length);
  return it == e.by_length.end() ? kNegInf : it->second.log_prob;
}

std::vector<std::vector<double>> BruteSpanPosteriors(const Enumeration& e,
                                                     std::span<const Token> y) {
  const int n = static_cast<int>(y.size());
  std::vector<std::vector<double>> post(n, std::vector<double>(n, 0.0));
  const double z = BruteLogLik(e, y);
  for (const ParseTree& t : e.trees) {
    if (!YieldIs(t, y)) continue;
    const double w = std::exp(t.log_prob - z);
    // A span is covered by at most one node: children exclude the parent's
    // own token.
    const auto spans = NodeSpans(t);
    for (size_t v = 0; v < t.nodes.size(); ++v) {
      if (t.nodes[v].nonterminal == 0) continue;
      post[spans[v].first][spans[v].second] += w;
    }
  }
  return post;
}

BruteCounts BruteExpectedCounts(const Grammar& grammar, const Enumeration& e,
                                std::span<const Token> y) {
  const int m = grammar.num_nonterminals();
  BruteCounts c;
  c.emit.assign(m, std::vector<double>(grammar.vocab_size(), 0.0));
  c.child.resize(m);
  for (int i = 0; i < m; ++i) c.child[i].assign(grammar.child_set(i).size(), 0.0);
  c.unary.assign(m, 0.0);
  c.ternary.assign(m, 0.0);
  const double z = BruteLogLik(e, y);
  for (const ParseTree& t : e.trees) {
    if (!YieldIs(t, y)) continue;
    const double w = std::exp(t.log_prob - z);
    for (const ParseNode& n : t.nodes) {
      if (n.nonterminal == 0) continue;
      c.emit[n.nonterminal][*n.token] += w;
      if (n.left < 0) {
        c.unary[n.nonterminal] += w;
        continue;
      }
      c.ternary[n.nonterminal] += w;
      const auto& cs = grammar.child_set(n.nonterminal);
      const ChildPair want{t.nodes[n.left].nonterminal,
                           t.nodes[n.right].nonterminal};
      for (size_t p = 0; p < cs.size(); ++p) {
        if (cs[p] == want) c.child[n.nonterminal][p] += w;
      }
    }
  }
  return c;
}

}  // namespace rhpcfg
