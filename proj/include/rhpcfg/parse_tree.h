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

#ifndef RHPCFG_PARSE_TREE_H_
#define RHPCFG_PARSE_TREE_H_

#include <optional>
#include <string>
#include <vector>

#include "rhpcfg/grammar.h"
#include "rhpcfg/rule_table.h"

namespace rhpcfg {

struct ParseNode {
  int nonterminal = 0;
  std::optional<Token> token;  // empty only for V_0
  int left = -1;               // index into ParseTree::nodes
  int right = -1;
  bool operator==(const ParseNode&) const = default;
};

// A derivation. nodes[0] is the root; nodes are stored in pre-order (node,
// left subtree, right subtree), so two derivations are equal iff their node
// vectors are equal.
struct ParseTree {
  std::vector<ParseNode> nodes;
  std::vector<Token> yield;
  double log_prob = 0.0;
  // alignment[p] is the nonterminal that emitted yield[p].
  std::vector<int> alignment;

  bool SameDerivation(const ParseTree& o) const { return nodes == o.nodes; }
};

// Fills yield and alignment from nodes by an in-order walk.
void ComputeYield(ParseTree& tree);

// Sum of the rule log-probabilities used by the tree. Throws
// std::invalid_argument if the tree uses a rule outside the grammar.
double ScoreTree(const Grammar& grammar, const RuleTable& table,
                 const ParseTree& tree);

// Throws std::invalid_argument describing the first illegal rule.
void CheckTreeLegal(const Grammar& grammar, const ParseTree& tree);

// Indented one-node-per-line rendering.
std::string RenderText(const ParseTree& tree,
                       const std::vector<std::string>* vocab = nullptr);
// Graphviz digraph; node labels are "V_i : token".
std::string RenderDot(const ParseTree& tree, const std::string& graph_name,
                      const std::vector<std::string>* vocab = nullptr);

}  // namespace rhpcfg

#endif  // RHPCFG_PARSE_TREE_H_
