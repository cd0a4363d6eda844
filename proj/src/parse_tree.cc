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

#include "rhpcfg/parse_tree.h"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace rhpcfg {

namespace {

std::string TokenLabel(const ParseNode& n,
                       const std::vector<std::string>* vocab) {
  if (!n.token) return "eps";
  if (vocab && *n.token >= 0 && *n.token < static_cast<Token>(vocab->size())) {
    return (*vocab)[*n.token];
  }
  return std::to_string(*n.token);
}

std::string DotEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// Index of the pair in child_set(i), or -1.
int FindPair(const Grammar& grammar, int i, int left, int right) {
  const auto& cs = grammar.child_set(i);
  const auto it = std::find(cs.begin(), cs.end(), ChildPair{left, right});
  return it == cs.end() ? -1 : static_cast<int>(it - cs.begin());
}

}  // namespace

void ComputeYield(ParseTree& tree) {
  tree.yield.clear();
  tree.alignment.clear();
  if (tree.nodes.empty()) return;
  std::function<void(int)> walk = [&](int v) {
    if (v < 0) return;
    const ParseNode& n = tree.nodes[v];
    walk(n.left);
    if (n.token) {
      tree.yield.push_back(*n.token);
      tree.alignment.push_back(n.nonterminal);
    }
    walk(n.right);
  };
  walk(0);
}

double ScoreTree(const Grammar& grammar, const RuleTable& table,
                 const ParseTree& tree) {
  CheckTreeLegal(grammar, tree);
  double total = 0.0;
  for (const ParseNode& n : tree.nodes) {
    if (n.nonterminal == 0) continue;
    if (n.left < 0) {
      total += table.UnaryLogProb(n.nonterminal, *n.token);
    } else {
      const int pair =
          FindPair(grammar, n.nonterminal, tree.nodes[n.left].nonterminal,
                   tree.nodes[n.right].nonterminal);
      total += table.TernaryLogProb(n.nonterminal, pair, *n.token);
    }
  }
  return total;
}

void CheckTreeLegal(const Grammar& grammar, const ParseTree& tree) {
  auto fail = [](size_t idx, const std::string& why) {
    throw std::invalid_argument("parse tree node " + std::to_string(idx) +
                                ": " + why);
  };
  if (tree.nodes.empty() || tree.nodes[0].nonterminal != 1) {
    throw std::invalid_argument("parse tree: root must be V_1");
  }
  for (size_t idx = 0; idx < tree.nodes.size(); ++idx) {
    const ParseNode& n = tree.nodes[idx];
    if (n.nonterminal < 0 || n.nonterminal >= grammar.num_nonterminals()) {
      fail(idx, "nonterminal out of range");
    }
    const bool has_left = n.left >= 0, has_right = n.right >= 0;
    if (has_left != has_right) fail(idx, "half-expanded node");
    if (n.nonterminal == 0) {
      if (n.token || has_left) fail(idx, "V_0 derives only the empty string");
      continue;
    }
    if (!n.token || *n.token < 0 || *n.token >= grammar.vocab_size()) {
      fail(idx, "missing or out-of-range token");
    }
    if (!has_left) {
      if (!grammar.can_emit(n.nonterminal)) {
        fail(idx, "V_" + std::to_string(n.nonterminal) +
                      " has no unary emission rule");
      }
      continue;
    }
    if (n.left >= static_cast<int>(tree.nodes.size()) ||
        n.right >= static_cast<int>(tree.nodes.size())) {
      fail(idx, "child reference out of range");
    }
    const int j = tree.nodes[n.left].nonterminal;
    const int k = tree.nodes[n.right].nonterminal;
    if (FindPair(grammar, n.nonterminal, j, k) < 0) {
      fail(idx, "V_" + std::to_string(n.nonterminal) + " -> V_" +
                    std::to_string(j) + " a V_" + std::to_string(k) +
                    " is not a rule");
    }
  }
}

std::string RenderText(const ParseTree& tree,
                       const std::vector<std::string>* vocab) {
  std::ostringstream out;
  std::function<void(int, int)> walk = [&](int v, int depth) {
    if (v < 0) return;
    const ParseNode& n = tree.nodes[v];
    out << std::string(2 * depth, ' ') << "V_" << n.nonterminal << " : "
        << TokenLabel(n, vocab) << '\n';
    walk(n.left, depth + 1);
    walk(n.right, depth + 1);
  };
  if (!tree.nodes.empty()) walk(0, 0);
  return out.str();
}

std::string RenderDot(const ParseTree& tree, const std::string& graph_name,
                      const std::vector<std::string>* vocab) {
  std::ostringstream out;
  out << "digraph \"" << DotEscape(graph_name) << "\" {\n";
  for (size_t v = 0; v < tree.nodes.size(); ++v) {
    const ParseNode& n = tree.nodes[v];
    out << "  n" << v << " [label=\"V_" << n.nonterminal << " : "
        << DotEscape(TokenLabel(n, vocab)) << "\"];\n";
  }
  for (size_t v = 0; v < tree.nodes.size(); ++v) {
    const ParseNode& n = tree.nodes[v];
    if (n.left >= 0) {
      out << "  n" << v << " -> n" << n.left << " [side=left];\n";
    }
    if (n.right >= 0) {
      out << "  n" << v << " -> n" << n.right << " [side=right];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace rhpcfg
