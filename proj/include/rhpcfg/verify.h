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

#ifndef RHPCFG_VERIFY_H_
#define RHPCFG_VERIFY_H_

// Seeded equivalence suite: dynamic programs against the enumeration oracle
// on small random grammars.

#include <cstdint>
#include <string>
#include <vector>

#include "rhpcfg/grammar.h"
#include "rhpcfg/rule_table.h"

namespace rhpcfg {

struct Instance {
  SupportTreeConfig config;
  GrammarPolicy policy;
  int vocab_size = 2;
  Scorer scorer;
  // Sentences to check: derivable yields plus one random string that may be
  // underivable.
  std::vector<Sentence> sentences;
};

inline constexpr int kSuiteMaxNonterminals = 10;
inline constexpr int kSuiteMaxLength = 6;
inline constexpr uint64_t kSuiteTreeCap = 250'000;

// The variant picks the policy and scorer: bit 0 closure, bit 1 all-node
// emission, bit 2 trilinear. The instance is non-degenerate, has m <= 10 and
// at most kSuiteTreeCap trees.
Instance MakeInstance(uint64_t seed, int variant);

struct SuiteReport {
  int instances = 0;
  int sentences = 0;
  double inside_dev = 0.0;        // |inside - brute sum| (log)
  double normalization_dev = 0.0; // |sum_T P(T) - 1|
  double viterbi_dev = 0.0;       // |max_p(1, L) - brute max| (log)
  double decode_dev = 0.0;        // decoded string's best tree vs max_p
  double best_parse_dev = 0.0;    // |best_parse.log_prob - brute max| (log)
  int best_parse_tree_mismatches = 0;
  double ratio_dev = 0.0;         // |ratio - brute max/sum|
  double outside_dev = 0.0;       // span posteriors vs brute
  double counts_dev = 0.0;        // expected counts vs brute
  double seconds = 0.0;

  struct Line {
    std::string property;
    double value;
    double tolerance;
    bool ok() const { return value <= tolerance; }
  };
  std::vector<Line> Lines(double tol) const;
  bool ok(double tol) const;
};

SuiteReport RunEquivalenceSuite(uint64_t seed, int count);

}  // namespace rhpcfg

#endif  // RHPCFG_VERIFY_H_
