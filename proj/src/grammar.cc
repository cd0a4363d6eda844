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

#include "rhpcfg/grammar.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rhpcfg {

std::string ToString(Emission e) {
  return e == Emission::kLeafOnly ? "leaf" : "all";
}

Emission ParseEmission(const std::string& s) {
  if (s == "leaf" || s == "leaf_only") return Emission::kLeafOnly;
  if (s == "all" || s == "all_nodes") return Emission::kAllNodes;
  throw std::invalid_argument("unknown emission policy '" + s + "'");
}

Grammar::Grammar(const SupportTreeConfig& config, int vocab_size,
                 GrammarPolicy policy)
    : tree_(config), vocab_size_(vocab_size), policy_(policy) {
  if (vocab_size < 1) {
    throw std::invalid_argument("grammar: vocab_size must be >= 1");
  }
  const int m = tree_.size();
  children_.resize(m);
  first_nonempty_.assign(m, 0);
  for (int i = 1; i < m; ++i) {
    const auto right = tree_.right_child(i);
    if (!right) continue;
    const Interval rhs = tree_.subtree_interval(*right);
    std::vector<int> lefts{0};
    if (const auto left = tree_.left_child(i)) {
      const Interval lhs = tree_.subtree_interval(*left);
      for (int j = lhs.lo; j <= lhs.hi; ++j) {
        if (j != 0) lefts.push_back(j);
      }
    }
    for (int j : lefts) {
      for (int k = rhs.lo; k <= rhs.hi; ++k) {
        if (tree_.InRightReach(k, i, policy_.closure)) {
          children_[i].push_back({j, k});
        }
      }
    }
    const auto& cs = children_[i];
    first_nonempty_[i] = static_cast<int>(
        std::find_if(cs.begin(), cs.end(),
                     [](const ChildPair& p) { return p.left != 0; }) -
        cs.begin());
  }
  report_ = ValidateGrammar(*this);
}

const std::vector<ChildPair>& Grammar::child_set(int i) const {
  if (i < 0 || i >= num_nonterminals()) {
    throw std::out_of_range("grammar: nonterminal " + std::to_string(i) +
                            " out of range");
  }
  return children_[i];
}

bool Grammar::can_emit(int i) const {
  if (i == 0) return false;
  if (policy_.emission == Emission::kAllNodes) return true;
  return tree_.IsLeaf(i);
}

int64_t Grammar::rule_space_size() const {
  int64_t total = 0;
  for (const auto& cs : children_) total += static_cast<int64_t>(cs.size());
  return total;
}

GrammarReport ValidateGrammar(const Grammar& grammar) {
  const SupportTree& tree = grammar.tree();
  const int m = tree.size();
  GrammarReport r;
  r.derivable.assign(m, false);
  r.min_len.assign(m, -1);
  r.max_len.assign(m, -1);
  r.derivable[0] = true;
  r.min_len[0] = r.max_len[0] = 0;

  // Children sit strictly inside the parent's interval, so smaller intervals
  // are always resolved first.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Interval ia = tree.subtree_interval(a);
    const Interval ib = tree.subtree_interval(b);
    return ia.hi - ia.lo < ib.hi - ib.lo;
  });
  for (int i : order) {
    if (i == 0) continue;
    int lo = -1, hi = -1;
    if (grammar.can_emit(i)) lo = hi = 1;
    for (const ChildPair& p : grammar.child_set(i)) {
      if (!r.derivable[p.left] || !r.derivable[p.right]) continue;
      const int pmin = r.min_len[p.left] + 1 + r.min_len[p.right];
      const int pmax = r.max_len[p.left] + 1 + r.max_len[p.right];
      lo = lo < 0 ? pmin : std::min(lo, pmin);
      hi = std::max(hi, pmax);
    }
    r.derivable[i] = lo > 0;
    r.min_len[i] = lo;
    r.max_len[i] = hi;
  }
  return r;
}

}  // namespace rhpcfg
