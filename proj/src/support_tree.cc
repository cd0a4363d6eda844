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

#include "rhpcfg/support_tree.h"

#include <functional>
#include <stdexcept>
#include <string>

namespace rhpcfg {

void SupportTreeConfig::Validate() const {
  if (src_len < 1) {
    throw std::invalid_argument("support tree: src_len must be >= 1, got " +
                                std::to_string(src_len));
  }
  if (upsample < 1) {
    throw std::invalid_argument("support tree: upsample must be >= 1, got " +
                                std::to_string(upsample));
  }
  if (depth < 0 || depth > 20) {
    throw std::invalid_argument("support tree: depth must be in [0, 20], got " +
                                std::to_string(depth));
  }
  const long long m =
      static_cast<long long>(upsample) * src_len * (1LL << depth) + 2;
  if (m > (1LL << 26)) {
    throw std::invalid_argument("support tree: too many nodes (" +
                                std::to_string(m) + ")");
  }
}

namespace {

// Pointer-free construction tree; ids are creation order, renumbered later.
struct Builder {
  std::vector<int> left, right;
  std::vector<char> chain;

  int NewNode(bool on_chain) {
    left.push_back(-1);
    right.push_back(-1);
    chain.push_back(on_chain);
    return static_cast<int>(left.size()) - 1;
  }

  int CompleteTree(int depth) {
    if (depth <= 0) return -1;
    const int root = NewNode(false);
    const int l = CompleteTree(depth - 1);
    const int r = CompleteTree(depth - 1);
    left[root] = l;
    right[root] = r;
    return root;
  }
};

}  // namespace

SupportTree::SupportTree(const SupportTreeConfig& config) : config_(config) {
  config_.Validate();

  Builder b;
  const int root = b.NewNode(true);
  b.left[root] = b.NewNode(false);
  int now = root;
  for (int t = 1; t < config_.main_chain_size(); ++t) {
    const int next = b.NewNode(true);
    b.right[now] = next;
    now = next;
    const int prefix = b.CompleteTree(config_.depth);
    b.left[now] = prefix;
  }

  // In-order renumbering.
  const int m = static_cast<int>(b.left.size());
  std::vector<int> order(m, -1);
  int next_id = 0;
  std::function<void(int)> visit = [&](int v) {
    if (v < 0) return;
    visit(b.left[v]);
    order[v] = next_id++;
    visit(b.right[v]);
  };
  visit(root);

  left_.assign(m, -1);
  right_.assign(m, -1);
  parent_.assign(m, -1);
  main_chain_.assign(m, 0);
  interval_.assign(m, Interval{});
  for (int v = 0; v < m; ++v) {
    const int id = order[v];
    main_chain_[id] = b.chain[v];
    if (b.left[v] >= 0) {
      left_[id] = order[b.left[v]];
      parent_[left_[id]] = id;
    }
    if (b.right[v] >= 0) {
      right_[id] = order[b.right[v]];
      parent_[right_[id]] = id;
    }
  }

  std::function<Interval(int)> span = [&](int id) {
    Interval iv{id, id};
    if (left_[id] >= 0) iv.lo = span(left_[id]).lo;
    if (right_[id] >= 0) iv.hi = span(right_[id]).hi;
    interval_[id] = iv;
    return iv;
  };
  span(order[root]);
}

void SupportTree::CheckIndex(int i) const {
  if (i < 0 || i >= size()) {
    throw std::out_of_range("support tree: node index " + std::to_string(i) +
                            " outside [0, " + std::to_string(size()) + ")");
  }
}

std::optional<int> SupportTree::left_child(int i) const {
  CheckIndex(i);
  return left_[i] < 0 ? std::nullopt : std::optional<int>(left_[i]);
}

std::optional<int> SupportTree::right_child(int i) const {
  CheckIndex(i);
  return right_[i] < 0 ? std::nullopt : std::optional<int>(right_[i]);
}

std::optional<int> SupportTree::parent(int i) const {
  CheckIndex(i);
  return parent_[i] < 0 ? std::nullopt : std::optional<int>(parent_[i]);
}

bool SupportTree::is_main_chain(int i) const {
  CheckIndex(i);
  return main_chain_[i] != 0;
}

Interval SupportTree::subtree_interval(int i) const {
  CheckIndex(i);
  return interval_[i];
}

std::vector<int> SupportTree::main_chain() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (main_chain_[i]) out.push_back(i);
  }
  return out;
}

bool SupportTree::IsLeaf(int i) const {
  CheckIndex(i);
  return left_[i] < 0 && right_[i] < 0;
}

bool SupportTree::InLeftReach(int j, int i) const {
  CheckIndex(j);
  CheckIndex(i);
  return left_[i] >= 0 && interval_[left_[i]].Contains(j);
}

bool SupportTree::InRightReach(int k, int i, bool closure) const {
  CheckIndex(k);
  CheckIndex(i);
  if (right_[i] < 0 || !interval_[right_[i]].Contains(k)) return false;
  return !(closure && main_chain_[i] && !main_chain_[k]);
}

}  // namespace rhpcfg
