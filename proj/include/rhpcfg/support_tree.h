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

#ifndef RHPCFG_SUPPORT_TREE_H_
#define RHPCFG_SUPPORT_TREE_H_

#include <optional>
#include <vector>

namespace rhpcfg {

struct SupportTreeConfig {
  int src_len = 1;   // source length
  int upsample = 1;  // upsampling ratio
  int depth = 0;     // depth of every local prefix tree

  // Width bound of local prefix trees: every prefix-tree yield is shorter.
  int prefix_width() const { return 1 << depth; }
  int node_count() const { return upsample * src_len * prefix_width() + 2; }
  int main_chain_size() const { return upsample * src_len + 1; }

  // Throws std::invalid_argument for zero/negative lengths or a depth that
  // would overflow the node count.
  void Validate() const;

  bool operator==(const SupportTreeConfig&) const = default;
};

struct Interval {
  int lo = 0;
  int hi = 0;
  bool Contains(int x) const { return lo <= x && x <= hi; }
  bool operator==(const Interval&) const = default;
};

// The fixed backbone of the grammar. Node ids are in-order traversal
// positions: node 0 is the root's only left child, node 1 is the root (start
// symbol), and the main chain is the right spine from the root.
//
// Immutable after construction.
class SupportTree {
 public:
  explicit SupportTree(const SupportTreeConfig& config);

  const SupportTreeConfig& config() const { return config_; }
  int size() const { return static_cast<int>(left_.size()); }

  std::optional<int> left_child(int i) const;
  std::optional<int> right_child(int i) const;
  std::optional<int> parent(int i) const;
  bool is_main_chain(int i) const;
  // In-order ids covered by the subtree rooted at i.
  Interval subtree_interval(int i) const;
  std::vector<int> main_chain() const;

  bool IsLeaf(int i) const;
  // j lies in the left subtree of i.
  bool InLeftReach(int j, int i) const;
  // k lies in the right subtree of i; with closure, a main-chain i also
  // requires k on the main chain.
  bool InRightReach(int k, int i, bool closure) const;

 private:
  void CheckIndex(int i) const;

  SupportTreeConfig config_;
  std::vector<int> left_;    // -1 when absent
  std::vector<int> right_;   // -1 when absent
  std::vector<int> parent_;  // -1 for the root
  std::vector<char> main_chain_;
  std::vector<Interval> interval_;
};

}  // namespace rhpcfg

#endif  // RHPCFG_SUPPORT_TREE_H_
