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

#include "rhpcfg/sampler.h"

#include <stdexcept>

#include "rhpcfg/log_space.h"

namespace rhpcfg {

namespace {

int Expand(const Grammar& grammar, const RuleTable& table, Rng& rng, int a,
           ParseTree& tree) {
  const int self = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(ParseNode{a, std::nullopt, -1, -1});
  if (a == 0) return self;

  const double families[2] = {table.unary_weight[a], table.ternary_weight[a]};
  const bool unary = rng.Categorical(families) == 0;
  const Token tok = static_cast<Token>(rng.Categorical(table.emit[a]));
  tree.nodes[self].token = tok;
  if (unary) {
    tree.log_prob += table.UnaryLogProb(a, tok);
    return self;
  }
  const int pair = static_cast<int>(rng.Categorical(table.child[a]));
  tree.log_prob += table.TernaryLogProb(a, pair, tok);
  const ChildPair& p = grammar.child_set(a)[pair];
  const int l = Expand(grammar, table, rng, p.left, tree);
  const int r = Expand(grammar, table, rng, p.right, tree);
  tree.nodes[self].left = l;
  tree.nodes[self].right = r;
  return self;
}

}  // namespace

ParseTree SampleTree(const Grammar& grammar, const RuleTable& table, Rng& rng) {
  if (grammar.report().degenerate()) {
    throw std::invalid_argument("sample: V_1 derives no terminal string");
  }
  ParseTree tree;
  Expand(grammar, table, rng, 1, tree);
  ComputeYield(tree);
  return tree;
}

ParseTree SampleTree(const Grammar& grammar, const RuleTable& table,
                     uint64_t seed) {
  Rng rng(seed);
  return SampleTree(grammar, table, rng);
}

}  // namespace rhpcfg
