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

#include "rhpcfg/verify.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "rhpcfg/chart.h"
#include "rhpcfg/decode.h"
#include "rhpcfg/oracle.h"
#include "rhpcfg/random.h"
#include "rhpcfg/train.h"

namespace rhpcfg {

namespace {

// Support trees with at most kSuiteMaxNonterminals nodes: (src_len,
// upsample, depth).
std::vector<SupportTreeConfig> SmallConfigs() {
  std::vector<SupportTreeConfig> out;
  for (int depth = 0; depth <= 3; ++depth) {
    for (int upsample = 1; upsample <= 4; ++upsample) {
      for (int src = 1; src <= 8; ++src) {
        SupportTreeConfig c{src, upsample, depth};
        if (c.node_count() <= kSuiteMaxNonterminals) out.push_back(c);
      }
    }
  }
  return out;
}

double LogDev(double a, double b) {
  if (a == b) return 0.0;  // includes both -inf
  return std::abs(a - b);  // inf when exactly one side is -inf
}

}  // namespace

Instance MakeInstance(uint64_t seed, int variant) {
  static const std::vector<SupportTreeConfig> configs = SmallConfigs();
  Rng rng(seed);
  for (;;) {
    Instance inst;
    inst.config = configs[rng.Below(configs.size())];
    inst.policy.closure = (variant & 1) != 0;
    inst.policy.emission =
        (variant & 2) != 0 ? Emission::kAllNodes : Emission::kLeafOnly;
    inst.vocab_size = 2 + static_cast<int>(rng.Below(2));
    const Grammar grammar(inst.config, inst.vocab_size, inst.policy);
    if (grammar.report().degenerate()) continue;
    if ((variant & 4) != 0) {
      TrilinearScorer s = TrilinearScorer::Random(
          grammar, 2 + static_cast<int>(rng.Below(2)), rng.Next(), 0.8);
      for (double& r : s.rho) r = rng.Uniform(0.2, 0.8);
      inst.scorer = std::move(s);
    } else {
      TabularScorer s = TabularScorer::Random(grammar, rng.Next(), 1.0);
      for (double& r : s.rho) r = rng.Uniform(0.2, 0.8);
      inst.scorer = std::move(s);
    }
    const RuleTable table = MakeRuleTable(grammar, inst.scorer);
    if (CountTrees(grammar, table, kSuiteTreeCap) > kSuiteTreeCap) continue;

    const Enumeration e = EnumerateAll(grammar, table, kSuiteTreeCap);
    std::vector<const std::vector<Token>*> short_yields;
    for (const auto& [y, lp] : e.by_string) {
      if (static_cast<int>(y.size()) <= kSuiteMaxLength) short_yields.push_back(&y);
    }
    if (short_yields.empty()) continue;
    for (int s = 0; s < 3; ++s) {
      inst.sentences.push_back(*short_yields[rng.Below(short_yields.size())]);
    }
    Sentence noise(1 + rng.Below(kSuiteMaxLength));
    for (Token& t : noise) t = static_cast<Token>(rng.Below(inst.vocab_size));
    inst.sentences.push_back(std::move(noise));
    return inst;
  }
}

std::vector<SuiteReport::Line> SuiteReport::Lines(double tol) const {
  const double mismatches = best_parse_tree_mismatches;
  return {
      {"inside_vs_enumeration", inside_dev, tol},
      {"normalization", normalization_dev, tol},
      {"viterbi_vs_enumeration", viterbi_dev, tol},
      {"decode_length_attains_max", decode_dev, tol},
      {"best_parse_vs_enumeration", best_parse_dev, tol},
      {"best_parse_tree_mismatches", mismatches, 0.0},
      {"max_tree_ratio_vs_enumeration", ratio_dev, tol},
      {"outside_posteriors_vs_enumeration", outside_dev, tol},
      {"expected_counts_vs_enumeration", counts_dev, tol},
  };
}

bool SuiteReport::ok(double tol) const {
  const auto lines = Lines(tol);
  return std::all_of(lines.begin(), lines.end(),
                     [](const Line& l) { return l.ok(); });
}

SuiteReport RunEquivalenceSuite(uint64_t seed, int count) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  Rng seeds(seed);
  for (int t = 0; t < count; ++t) {
    const Instance inst = MakeInstance(seeds.Next(), t % 8);
    const Grammar grammar(inst.config, inst.vocab_size, inst.policy);
    const RuleTable table = MakeRuleTable(grammar, inst.scorer);
    const Enumeration e = EnumerateAll(grammar, table, kSuiteTreeCap);
    ++rep.instances;

    double mass = 0.0;
    for (const ParseTree& tree : e.trees) mass += std::exp(tree.log_prob);
    rep.normalization_dev = std::max(rep.normalization_dev, std::abs(mass - 1.0));

    const ViterbiTables vt = BuildViterbiTables(grammar, table, kSuiteMaxLength);
    for (int len = 1; len <= kSuiteMaxLength; ++len) {
      const double want = BruteViterbi(e, len);
      rep.viterbi_dev = std::max(rep.viterbi_dev, LogDev(vt.at(1, len), want));
      if (want == kNegInf) continue;
      const ParseTree decoded = DecodeLength(vt, len);
      rep.decode_dev = std::max(
          rep.decode_dev, LogDev(BruteBestLogProb(e, decoded.yield), want));
    }

    for (const Sentence& y : inst.sentences) {
      ++rep.sentences;
      const InsideChart inside = Inside(grammar, table, y);
      const double brute = BruteLogLik(e, y);
      rep.inside_dev = std::max(rep.inside_dev, LogDev(inside.root_loglik(), brute));
      if (brute == kNegInf) continue;

      const ParseTree best = BestParse(grammar, table, y);
      const ParseTree& want = BruteBestParse(e, y);
      rep.best_parse_dev =
          std::max(rep.best_parse_dev, LogDev(best.log_prob, want.log_prob));
      if (!best.SameDerivation(want)) ++rep.best_parse_tree_mismatches;
      rep.ratio_dev = std::max(
          rep.ratio_dev, std::abs(MaxTreeRatio(grammar, table, y) -
                                  std::exp(want.log_prob - brute)));

      const OutsideChart outside = Outside(grammar, table, y, inside);
      const auto post = BruteSpanPosteriors(e, y);
      const int n = static_cast<int>(y.size());
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          double covered = 0.0;
          for (int a = 1; a < grammar.num_nonterminals(); ++a) {
            const double v = inside.at(a, i, j) + outside.at(a, i, j);
            if (v > kNegInf) covered += std::exp(v - inside.root_loglik());
          }
          rep.outside_dev = std::max(rep.outside_dev, std::abs(covered - post[i][j]));
        }
      }

      const ExpectedCounts got = ComputeExpectedCounts(grammar, table, y);
      const BruteCounts ref = BruteExpectedCounts(grammar, e, y);
      for (int a = 0; a < grammar.num_nonterminals(); ++a) {
        double dev = std::max(std::abs(got.unary[a] - ref.unary[a]),
                              std::abs(got.ternary[a] - ref.ternary[a]));
        for (size_t v = 0; v < got.emit[a].size(); ++v) {
          dev = std::max(dev, std::abs(got.emit[a][v] - ref.emit[a][v]));
        }
        for (size_t p = 0; p < got.child[a].size(); ++p) {
          dev = std::max(dev, std::abs(got.child[a][p] - ref.child[a][p]));
        }
        rep.counts_dev = std::max(rep.counts_dev, dev);
      }
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
  return rep;
}

}  // namespace rhpcfg
