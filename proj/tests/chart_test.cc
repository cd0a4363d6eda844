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

#include "rhpcfg/chart.h"

#include <cmath>

#include "boat_example.h"
#include "doctest.h"
#include "rhpcfg/oracle.h"
#include "rhpcfg/random.h"
#include "rhpcfg/sampler.h"
#include "rhpcfg/verify.h"
#include "test_util.h"

namespace rhpcfg {
namespace {

using testing::MakeGrammar;
using testing::UniformWithRho;

TEST_CASE("chart: two uniform emissions through the single rule") {
  const Grammar g = MakeGrammar(1, 1, 1, 2, true, Emission::kAllNodes);
  const RuleTable t = RuleTableFromTabular(g, UniformWithRho(g, 0.0));
  for (Token a : {0, 1}) {
    for (Token b : {0, 1}) {
      const Sentence y{a, b};
      CHECK(LogLikelihood(g, t, y) == doctest::Approx(std::log(0.25)).epsilon(1e-14));
    }
  }
  CHECK(LogLikelihood(g, t, Sentence{0}) == kNegInf);
  CHECK(LogLikelihood(g, t, Sentence{0, 1, 0}) == kNegInf);
}

TEST_CASE("chart: leaf-only root cannot yield one token") {
  const Grammar g = MakeGrammar(1, 1, 1, 2, false, Emission::kLeafOnly);
  const RuleTable t = RuleTableFromTabular(g, TabularScorer::Uniform(g));
  CHECK(LogLikelihood(g, t, Sentence{1}) == kNegInf);
  CHECK(std::isfinite(LogLikelihood(g, t, Sentence{1, 0})));
}

TEST_CASE("chart: input errors") {
  const Grammar g = MakeGrammar(1, 1, 1, 2, false, Emission::kLeafOnly);
  const RuleTable t = RuleTableFromTabular(g, TabularScorer::Uniform(g));
  CHECK_THROWS_AS(Inside(g, t, Sentence{}), std::invalid_argument);
  CHECK_THROWS_AS(Inside(g, t, Sentence{0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Inside(g, t, Sentence{-1}), std::invalid_argument);
  const Grammar dead = MakeGrammar(1, 1, 1, 2, true, Emission::kLeafOnly);
  const RuleTable td = RuleTableFromTabular(dead, TabularScorer::Uniform(dead));
  CHECK_THROWS_AS(Inside(dead, td, Sentence{0, 1}), std::invalid_argument);
}

TEST_CASE("chart: worked derivation likelihood is the sum of its rules") {
  const Grammar g = testing::BoatGrammar();
  const RuleTable t = testing::BoatTable(g);
  const ParseTree tree = testing::BoatTree();
  CheckTreeLegal(g, tree);
  const double score = ScoreTree(g, t, tree);
  double expect = 5 * std::log(0.99);
  for (double p : {0.9, 0.8, 0.7, 0.6, 0.5, 0.95, 0.4, 0.85, 0.3, 0.75, 0.65,
                   0.55, 0.45}) {
    expect += std::log(p);
  }
  CHECK(score == doctest::Approx(expect).epsilon(1e-14));
  CHECK(LogLikelihood(g, t, testing::BoatSentence()) ==
        doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("chart: stored cells are log probabilities") {
  const Grammar g = MakeGrammar(2, 2, 1, 3, false, Emission::kAllNodes);
  const RuleTable t = RuleTableFromTabular(g, TabularScorer::Random(g, 5, 2.0));
  Rng rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const ParseTree s = SampleTree(g, t, rng);
    const InsideChart c = Inside(g, t, s.yield);
    const int n = c.length();
    CHECK(c.root_loglik() == c.at(1, 0, n - 1));
    CHECK(c.root_loglik() >= s.log_prob - 1e-12);
    for (int a = 0; a < g.num_nonterminals(); ++a) {
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const double v = c.at(a, i, j);
          CHECK_FALSE(std::isnan(v));
          CHECK(v <= 1e-12);
          if (!c.values().Stored(a, i, j)) CHECK(v == kNegInf);
        }
      }
    }
  }
}

TEST_CASE("chart: off-region cells are not stored") {
  const Grammar g = MakeGrammar(3, 1, 2, 2, false, Emission::kLeafOnly);
  const SpanChart c(g, 8);
  // A prefix-tree node never covers d or more tokens.
  CHECK_FALSE(c.Stored(3, 0, 3));
  CHECK(c.Stored(3, 0, 2));
  // A main-chain node only covers suffixes.
  CHECK(c.Stored(5, 2, 7));
  CHECK_FALSE(c.Stored(5, 2, 6));
  CHECK(c.at(5, 2, 6) == kNegInf);
}

TEST_CASE("chart: strings sum to one") {
  for (int variant = 0; variant < 8; ++variant) {
    const Instance inst = MakeInstance(100 + variant, variant);
    const Grammar g(inst.config, inst.vocab_size, inst.policy);
    const RuleTable t = MakeRuleTable(g, inst.scorer);
    const Enumeration e = EnumerateAll(g, t, kSuiteTreeCap);
    std::vector<double> logs;
    for (const auto& [y, lp] : e.by_string) {
      const double ll = LogLikelihood(g, t, y);
      CHECK(ll == doctest::Approx(lp).epsilon(1e-9));
      logs.push_back(ll);
    }
    CHECK(std::exp(LogSumExp(logs)) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("chart: removing rules never raises the likelihood") {
  Rng rng(77);
  for (int rep = 0; rep < 40; ++rep) {
    const Instance inst = MakeInstance(500 + rep, rep % 8);
    const Grammar g(inst.config, inst.vocab_size, inst.policy);
    RuleTable t = MakeRuleTable(g, inst.scorer);
    const Sentence y = SampleTree(g, t, rng).yield;
    double before = LogLikelihood(g, t, y);
    for (int cut = 0; cut < 6; ++cut) {
      const int i = 1 + static_cast<int>(rng.Below(g.num_nonterminals() - 1));
      switch (rng.Below(3)) {
        case 0:
          t.emit[i][rng.Below(g.vocab_size())] = kNegInf;
          break;
        case 1:
          if (!t.child[i].empty()) t.child[i][rng.Below(t.child[i].size())] = kNegInf;
          break;
        default:
          t.unary_weight[i] = kNegInf;
      }
      const double after = LogLikelihood(g, t, y);
      CHECK(after <= before);
      before = after;
    }
  }
}

}  // namespace
}  // namespace rhpcfg
