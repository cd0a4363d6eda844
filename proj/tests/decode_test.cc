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

#include "rhpcfg/decode.h"

#include <cmath>

#include "boat_example.h"
#include "doctest.h"
#include "rhpcfg/chart.h"
#include "rhpcfg/errors.h"
#include "rhpcfg/oracle.h"
#include "rhpcfg/sampler.h"
#include "rhpcfg/verify.h"
#include "test_util.h"

namespace rhpcfg {
namespace {

using testing::MakeGrammar;
using testing::UniformWithRho;

TEST_CASE("decode: unique derivation and its alignment") {
  const Grammar g = MakeGrammar(1, 1, 1, 2, true, Emission::kAllNodes);
  const RuleTable t = RuleTableFromTabular(g, TabularScorer::Random(g, 6, 1.0));
  const Sentence y{0, 1};
  const ParseTree best = BestParse(g, t, y);
  CHECK(best.alignment == std::vector<int>{1, 3});
  CHECK(best.yield == y);
  CHECK(best.log_prob == doctest::Approx(LogLikelihood(g, t, y)).epsilon(1e-14));
  CHECK(MaxTreeRatio(g, t, y) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decode: two equal derivations give ratio one half") {
  // V_1 -> V_0 a V_2 and V_1 -> V_0 a V_3 with equal child weights.
  const Grammar g = MakeGrammar(1, 1, 1, 2, false, Emission::kAllNodes);
  const RuleTable t = RuleTableFromTabular(g, TabularScorer::Uniform(g));
  CHECK(MaxTreeRatio(g, t, Sentence{1, 0}) == doctest::Approx(0.5).epsilon(1e-12));
  // Ties go to child_set order, so the right child is V_2.
  CHECK(BestParse(g, t, Sentence{1, 0}).alignment == std::vector<int>{1, 2});
}

TEST_CASE("decode: underivable input") {
  const Grammar g = MakeGrammar(1, 1, 1, 2, true, Emission::kAllNodes);
  const RuleTable t = RuleTableFromTabular(g, TabularScorer::Uniform(g));
  CHECK_THROWS_AS(BestParse(g, t, Sentence{0, 0, 0}), UnderivableError);
  CHECK_THROWS_AS(MaxTreeRatio(g, t, Sentence{0, 0, 0}), UnderivableError);
}

TEST_CASE("decode: worked derivation is recovered exactly") {
  const Grammar g = testing::BoatGrammar();
  const RuleTable t = testing::BoatTable(g);
  const ParseTree best = BestParse(g, t, testing::BoatSentence());
  CHECK(best.SameDerivation(testing::BoatTree()));
  CHECK(best.alignment == testing::BoatAlignment());
  const std::string text = RenderText(best, &testing::BoatVocab());
  CHECK(text.find("V_9 : boat") != std::string::npos);
  CHECK(text.find("V_0 : eps") != std::string::npos);
}

TEST_CASE("decode: renderings") {
  const Grammar g = MakeGrammar(1, 1, 1, 2, true, Emission::kAllNodes);
  const RuleTable t = RuleTableFromTabular(g, TabularScorer::Uniform(g));
  const ParseTree best = BestParse(g, t, Sentence{0, 1});
  const std::vector<std::string> words = {"u", "w"};
  const std::string dot = RenderDot(best, "g", &words);
  CHECK(dot.rfind("digraph \"g\" {", 0) == 0);
  CHECK(dot.find("V_1 : u") != std::string::npos);
  CHECK(dot.find("V_3 : w") != std::string::npos);
  CHECK(dot.find("side=left") != std::string::npos);
  CHECK(dot.find("side=right") != std::string::npos);
  CHECK(RenderText(best).find("V_3 : 1") != std::string::npos);
}

TEST_CASE("decode: viterbi closed form and length bounds") {
  const Grammar g = MakeGrammar(1, 1, 1, 2, true, Emission::kAllNodes);
  const RuleTable t = RuleTableFromTabular(g, UniformWithRho(g, 0.5));
  const ViterbiTables v = BuildViterbiTables(g, t, 4);
  CHECK(v.at(1, 2) == doctest::Approx(std::log(0.125)).epsilon(1e-14));
  CHECK(v.at(1, 1) == doctest::Approx(std::log(0.25)).epsilon(1e-14));
  CHECK(v.at(1, 3) == kNegInf);
  CHECK(v.at(1, 4) == kNegInf);
  CHECK_THROWS_AS(DecodeLength(v, 3), UnderivableError);
  const ParseTree tree = DecodeLength(v, 2);
  CHECK(tree.yield.size() == 2);
  CHECK(ScoreTree(g, t, tree) == doctest::Approx(v.at(1, 2)).epsilon(1e-14));
}

TEST_CASE("decode: tables respect the derivable lengths") {
  for (int variant = 0; variant < 8; ++variant) {
    const Instance inst = MakeInstance(300 + variant, variant);
    const Grammar g(inst.config, inst.vocab_size, inst.policy);
    const RuleTable t = MakeRuleTable(g, inst.scorer);
    const ViterbiTables v = BuildViterbiTables(g, t, 12);
    for (int a = 1; a < g.num_nonterminals(); ++a) {
      const int hi = g.report().max_len[a];
      for (int L = 1; L <= 12; ++L) {
        if (L > hi || L < g.report().min_len[a]) CHECK(v.at(a, L) == kNegInf);
      }
    }
    for (int L = 1; L <= 12; ++L) {
      if (v.at(1, L) == kNegInf) continue;
      const ParseTree tree = DecodeLength(v, L);
      CheckTreeLegal(g, tree);
      CHECK(static_cast<int>(tree.yield.size()) == L);
      CHECK(ScoreTree(g, t, tree) == doctest::Approx(v.at(1, L)).epsilon(1e-12));
      CHECK(tree.log_prob == v.at(1, L));
    }
  }
}

TEST_CASE("decode: sampled trees never beat the length maximum") {
  const Grammar g = MakeGrammar(2, 2, 1, 3, false, Emission::kAllNodes);
  const RuleTable t = RuleTableFromTabular(g, TabularScorer::Random(g, 31, 1.0));
  const int max_len = g.report().max_len[1];
  const ViterbiTables v = BuildViterbiTables(g, t, max_len);
  Rng rng(31);
  for (int rep = 0; rep < 2000; ++rep) {
    const ParseTree s = SampleTree(g, t, rng);
    CHECK(s.log_prob <= v.at(1, static_cast<int>(s.yield.size())) + 1e-12);
  }
}

TEST_CASE("decode: best parse alignment covers every token") {
  const Grammar g = MakeGrammar(2, 1, 2, 3, false, Emission::kLeafOnly);
  const RuleTable t = RuleTableFromTabular(g, TabularScorer::Random(g, 12, 1.0));
  Rng rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    const Sentence y = SampleTree(g, t, rng).yield;
    const ParseTree best = BestParse(g, t, y);
    CHECK(best.yield == y);
    REQUIRE(best.alignment.size() == y.size());
    for (size_t p = 0; p < y.size(); ++p) {
      int owners = 0;
      for (const ParseNode& node : best.nodes) {
        owners += node.nonterminal == best.alignment[p] && node.token == y[p];
      }
      CHECK(owners >= 1);
    }
    CHECK(best.log_prob <= LogLikelihood(g, t, y) + 1e-12);
    CHECK(BestParse(g, t, y).SameDerivation(best));
  }
}

TEST_CASE("decode: rerank modes") {
  const Grammar g = MakeGrammar(1, 1, 1, 2, true, Emission::kAllNodes);
  TabularScorer s = TabularScorer::Uniform(g);
  s.rho[1] = 0.6;
  s.emit_logits[0] = {5.0, 0.0};
  s.emit_logits[2] = {0.0, 5.0};
  const RuleTable t = RuleTableFromTabular(g, s);
  const double p = 1.0 / (1.0 + std::exp(-5.0));
  const double raw1 = std::log(0.6 * p), raw2 = std::log(0.4 * p * p);
  REQUIRE(raw1 > raw2);
  REQUIRE(raw2 / 2 > raw1);

  const Candidate r = Decode(g, t, 1, 2, Rerank::kRaw);
  CHECK(r.length == 1);
  CHECK(r.score == doctest::Approx(raw1).epsilon(1e-14));
  CHECK(r.tree.yield == Sentence{0});
  const Candidate pt = Decode(g, t, 1, 2, Rerank::kPerToken);
  CHECK(pt.length == 2);
  CHECK(pt.score == doctest::Approx(raw2 / 2).epsilon(1e-14));
  CHECK(pt.tree.yield == Sentence{0, 1});

  // One derivable length in range.
  CHECK(Decode(g, t, 2, 5, Rerank::kRaw).length == 2);
  CHECK(Decode(g, t, 2, 5, Rerank::kPerToken).length == 2);
  CHECK_THROWS_AS(Decode(g, t, 3, 5, Rerank::kRaw), UnderivableError);
  CHECK_THROWS_AS(Decode(g, t, 2, 1, Rerank::kRaw), std::invalid_argument);
}

TEST_CASE("decode: equal scores go to the shorter length") {
  // Derivable lengths 1 and 2 with identical raw scores.
  const Grammar g = MakeGrammar(1, 1, 1, 1, true, Emission::kAllNodes);
  TabularScorer s = TabularScorer::Uniform(g);
  s.rho[1] = 0.5;
  const RuleTable t = RuleTableFromTabular(g, s);
  REQUIRE(BuildViterbiTables(g, t, 2).at(1, 1) ==
          BuildViterbiTables(g, t, 2).at(1, 2));
  CHECK(Decode(g, t, 1, 2, Rerank::kRaw).length == 1);
}

}  // namespace
}  // namespace rhpcfg
