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

#ifndef RHPCFG_SAMPLER_H_
#define RHPCFG_SAMPLER_H_

#include <cstdint>

#include "rhpcfg/parse_tree.h"
#include "rhpcfg/random.h"

namespace rhpcfg {

// Top-down ancestral sampling from V_1. The returned tree's log_prob is the
// sum of the sampled rule log-probabilities and its yield is the sampled
// string. Throws std::invalid_argument for a degenerate grammar.
ParseTree SampleTree(const Grammar& grammar, const RuleTable& table, Rng& rng);
ParseTree SampleTree(const Grammar& grammar, const RuleTable& table,
                     uint64_t seed);

}  // namespace rhpcfg

#endif  // RHPCFG_SAMPLER_H_
