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

#include <set>
#include <stdexcept>

#include "doctest.h"

namespace rhpcfg {
namespace {

// Ancestor walk from j upward: true when j sits under the given child of i.
bool UnderChild(const SupportTree& t, int j, int i, bool left) {
  const auto c = left ? t.left_child(i) : t.right_child(i);
  if (!c) return false;
  for (std::optional<int> v = j; v; v = t.parent(*v)) {
    if (*v == *c) return true;
  }
  return false;
}

TEST_CASE("support tree: worked configurations") {
  const SupportTree t({3, 1, 2});
  CHECK(t.size() == 14);
  CHECK(t.main_chain() == std::vector<int>{1, 5, 9, 13});
  CHECK(*t.left_child(1) == 0);
  CHECK_FALSE(t.parent(1).has_value());

  const SupportTree small({1, 1, 1});
  CHECK(small.size() == 4);
  CHECK(small.main_chain() == std::vector<int>{1, 3});
  CHECK(*small.left_child(3) == 2);
  CHECK(small.IsLeaf(2));

  CHECK(SupportTree({2, 4, 1}).size() == 18);
  CHECK(SupportTree({10, 4, 1}).size() == 82);
}

TEST_CASE("support tree: zero depth is a bare chain") {
  const SupportTree t({3, 2, 0});
  CHECK(t.size() == 8);
  CHECK(t.main_chain() == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("support tree: rejects bad configs and indices") {
  CHECK_THROWS_AS(SupportTree({0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SupportTree({1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SupportTree({1, 1, -1}), std::invalid_argument);
  const SupportTree t({1, 1, 1});
  CHECK_THROWS_AS(t.IsLeaf(4), std::out_of_range);
  CHECK_THROWS_AS(t.InLeftReach(-1, 1), std::out_of_range);
}

TEST_CASE("support tree: leaf and reach predicates") {
  const SupportTree t({3, 1, 2});
  CHECK_FALSE(t.IsLeaf(1));
  CHECK_FALSE(t.IsLeaf(13));
  CHECK(t.subtree_interval(*t.left_child(13)) == Interval{10, 12});
  CHECK(t.InLeftReach(3, 5));
  CHECK_FALSE(t.InLeftReach(6, 5));
  CHECK_FALSE(t.InRightReach(10, 9, true));
  CHECK(t.InRightReach(10, 9, false));
  for (int i = 0; i < t.size(); ++i) {
    CHECK_FALSE(t.InLeftReach(i, i));
    CHECK_FALSE(t.InRightReach(i, i, false));
    CHECK_FALSE(t.InRightReach(i, i, true));
  }
}

TEST_CASE("support tree: in-order numbering and main chain closed form") {
  for (int lx = 1; lx <= 8; ++lx) {
    for (int lambda = 1; lambda <= 4; ++lambda) {
      for (int l = 0; l <= 3; ++l) {
        const SupportTree t({lx, lambda, l});
        const int m = t.size();
        REQUIRE(m == lambda * lx * (1 << l) + 2);
        std::set<int> chain;
        for (int s = 0; s <= lambda * lx; ++s) chain.insert(s * (1 << l) + 1);
        // Walk right links from the root instead of trusting the flags.
        std::set<int> walked;
        for (std::optional<int> v = 1; v; v = t.right_child(*v)) walked.insert(*v);
        CHECK(walked == chain);
        for (int i = 0; i < m; ++i) {
          CHECK(t.is_main_chain(i) == (chain.count(i) > 0));
          if (auto c = t.left_child(i)) CHECK(t.subtree_interval(*c).hi == i - 1);
          if (auto c = t.right_child(i)) CHECK(t.subtree_interval(*c).lo == i + 1);
          if (t.is_main_chain(i) && i != 1) {
            if (l == 0) {
              CHECK_FALSE(t.left_child(i).has_value());
            } else {
              const Interval iv = t.subtree_interval(*t.left_child(i));
              CHECK(iv.hi - iv.lo + 1 == (1 << l) - 1);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("support tree: interval predicates agree with ancestor walks") {
  for (int lx = 1; lx <= 6; ++lx) {
    for (int lambda = 1; lambda <= 3; ++lambda) {
      for (int l = 0; l <= 3; ++l) {
        const SupportTree t({lx, lambda, l});
        if (t.size() > 40) continue;
        for (int i = 0; i < t.size(); ++i) {
          for (int j = 0; j < t.size(); ++j) {
            CHECK(t.InLeftReach(j, i) == UnderChild(t, j, i, true));
            const bool right = UnderChild(t, j, i, false);
            CHECK(t.InRightReach(j, i, false) == right);
            CHECK(t.InRightReach(j, i, true) ==
                  (right && (!t.is_main_chain(i) || t.is_main_chain(j))));
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace rhpcfg
