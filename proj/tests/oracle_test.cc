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

#include <cmath>
#include <set>

#include "doctest.h"
#include "rhpcfg/chart.h"
#include "rhpcfg/sampler.h"
#include "rhpcfg/verify.h"
#include "test_util.h"

namespace rhpcfg {
namespace {

using testing::MakeGrammar;

TEST_CASE("oracle: hand count on the four-node tree") {
  const Grammar g = MakeGrammar(1, 1, 1, 2, true, Emission::kAllNodes);
  const RuleTable t = RuleTableFromTabular(g, TabularScorer::Random(g, 1, 1.0));
  CHECK(CountTrees(g, t) == 6);
  const Enumeration e = EnumerateAll(g, t);
  CHECK(e.trees.size() == 6);
  CHECK(e.by_string.size() == 6);
  int one = 0, two = 0;
  for (const ParseTree& tree : e.trees) {
    one += tree.yield.size() == 1;
    two += tree.yield.size() == 2;
  }
  CHECK(one == 2);
  CHECK(two == 4);
}

TEST_CASE("oracle: rejects degenerate grammars and oversized spaces") {
  const Grammar dead = MakeGrammar(1, 1, 1, 2, true, Emission::kLeafOnly);
  CHECK_THROWS_AS(
      EnumerateAll(dead, RuleTableFromTabular(dead, TabularScorer::Uniform(dead))),
      std::invalid_argument);
  const Grammar big = MakeGrammar(2, 2, 2, 3, false, Emission::kAllNodes);
  const RuleTable t = RuleTableFromTabular(big, TabularScorer::Uniform(big));
  CHECK(CountTrees(big, t, 1000) == 1001);
  CHECK_THROWS_AS(EnumerateAll(big, t, 1000), std::invalid_argument);
}

TEST_CASE("oracle: enumeration invariants on random instances") {
  for (int variant = 0; variant < 16; ++variant) {
    const Instance inst = MakeInstance(900 + variant, variant % 8);
    const Grammar g(inst.config, inst.vocab_size, inst.policy);
    const RuleTable t = MakeRuleTable(g, inst.scorer);
    const Enumeration e = EnumerateAll(g, t, kSuiteTreeCap);
    CHECK(CountTrees(g, t, kSuiteTreeCap) == e.trees.size());
    std::vector<double> logs;
    std::set<std::string> seen;
    for (const ParseTree& tree : e.trees) {
      CheckTreeLegal(g, tree);
      CHECK(tree.log_prob > kNegInf);
      CHECK(ScoreTree(g, t, tree) == doctest::Approx(tree.log_prob).epsilon(1e-12));
      seen.insert(RenderText(tree));
      logs.push_back(tree.log_prob);
    }
    CHECK(seen.size() == e.trees.size());
    CHECK(std::exp(LogSumExp(logs)) == doctest::Approx(1.0).epsilon(1e-9));

    Rng rng(variant);
    for (int rep = 0; rep < 20; ++rep) {
      const ParseTree s = SampleTree(g, t, rng);
      // Slack for summation order between sampler and enumeration.
      CHECK(BruteViterbi(e, static_cast<int>(s.yield.size())) >= s.log_prob - 1e-12);
      CHECK(BruteBestLogProb(e, s.yield) >= s.log_prob - 1e-12);
      CHECK(BruteLogLik(e, s.yield) >= BruteBestLogProb(e, s.yield) - 1e-12);
    }
  }
}

TEST_CASE("oracle: absent strings and lengths") {
  const Grammar g = MakeGrammar(1, 1, 1, 2, true, Emission::kAllNodes);
  const Enumeration e =
      EnumerateAll(g, RuleTableFromTabular(g, TabularScorer::Uniform(g)));
  const Sentence y{0, 0, 0};
  CHECK(BruteLogLik(e, y) == kNegInf);
  CHECK(BruteViterbi(e, 3) == kNegInf);
  CHECK_THROWS_AS(BruteBestParse(e, y), std::invalid_argument);
  // Every string here has a single tree.
  for (const auto& [s, lp] : e.by_string) {
    CHECK(BruteBestParse(e, s).log_prob == lp);
  }
}

TEST_CASE("oracle: small seeded equivalence suite") {
  const SuiteReport r = RunEquivalenceSuite(3, 16);
  CHECK(r.instances == 16);
  CHECK(r.sentences > 16);
  for (const auto& line : r.Lines(1e-9)) {
    INFO(line.property);
    CHECK(line.ok());
  }
  CHECK(r.best_parse_tree_mismatches == 0);
}

TEST_CASE("oracle: suite instances respect their size limits") {
  for (int t = 0; t < 40; ++t) {
    const Instance inst = MakeInstance(t, t % 8);
    CHECK(inst.config.node_count() <= kSuiteMaxNonterminals);
    CHECK(inst.vocab_size <= 3);
    CHECK(inst.policy.closure == bool(t & 1));
    CHECK((inst.policy.emission == Emission::kAllNodes) == bool(t & 2));
    CHECK(ScorerKind(inst.scorer) == (t & 4 ? "trilinear" : "tabular"));
    for (const Sentence& y : inst.sentences) {
      CHECK(!y.empty());
      CHECK(static_cast<int>(y.size()) <= kSuiteMaxLength);
    }
  }
}

}  // namespace
}  // namespace rhpcfg
