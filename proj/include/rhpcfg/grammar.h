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

#ifndef RHPCFG_GRAMMAR_H_
#define RHPCFG_GRAMMAR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rhpcfg/support_tree.h"

namespace rhpcfg {

using Token = int32_t;
using Sentence = std::vector<Token>;

enum class Emission {
  kLeafOnly,  // only support-tree leaves may use V_i -> a
  kAllNodes,  // every V_i, i >= 1, may use V_i -> a
};

struct GrammarPolicy {
  bool closure = false;
  Emission emission = Emission::kLeafOnly;
  bool operator==(const GrammarPolicy&) const = default;
};

std::string ToString(Emission e);
Emission ParseEmission(const std::string& s);

// Children of a ternary rule V_i -> V_left a V_right. left == 0 means the
// empty left child V_0.
struct ChildPair {
  int left = 0;
  int right = 0;
  bool operator==(const ChildPair&) const = default;
};

// Result of the emptiness/termination analysis.
struct GrammarReport {
  std::vector<bool> derivable;
  // Shortest/longest yields; -1 where not derivable. V_0 derives only the
  // empty string, so min_len[0] == max_len[0] == 0.
  std::vector<int> min_len;
  std::vector<int> max_len;

  bool degenerate() const { return derivable.size() < 2 || !derivable[1]; }
};

// The rule space over a support tree:
//   V_0 -> eps
//   V_i -> a                when can_emit(i)
//   V_i -> V_j a V_k        for every (j, k) in child_set(i)
class Grammar {
 public:
  Grammar(const SupportTreeConfig& config, int vocab_size,
          GrammarPolicy policy = {});

  const SupportTree& tree() const { return tree_; }
  int vocab_size() const { return vocab_size_; }
  const GrammarPolicy& policy() const { return policy_; }
  int num_nonterminals() const { return tree_.size(); }
  // Strict upper bound on the yield length of any local prefix tree node.
  int prefix_width() const { return tree_.config().prefix_width(); }

  // Legal children, ascending by left then right. Empty for i = 0.
  const std::vector<ChildPair>& child_set(int i) const;
  // Index into child_set(i) of the first pair with a non-empty left child.
  int first_nonempty_left(int i) const { return first_nonempty_[i]; }
  bool can_emit(int i) const;

  // Total number of ternary rule shapes, sum over i of |child_set(i)|.
  int64_t rule_space_size() const;

  const GrammarReport& report() const { return report_; }
  bool derivable(int i) const { return report_.derivable[i]; }
  // Both children of the pair can terminate.
  bool productive(const ChildPair& p) const {
    return report_.derivable[p.left] && report_.derivable[p.right];
  }

 private:
  SupportTree tree_;
  int vocab_size_;
  GrammarPolicy policy_;
  std::vector<std::vector<ChildPair>> children_;
  std::vector<int> first_nonempty_;
  GrammarReport report_;
};

GrammarReport ValidateGrammar(const Grammar& grammar);

}  // namespace rhpcfg

#endif  // RHPCFG_GRAMMAR_H_
