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

#ifndef RHPCFG_PARAM_FILE_H_
#define RHPCFG_PARAM_FILE_H_

#include <string>

#include "rhpcfg/rule_table.h"

namespace rhpcfg {

inline constexpr int kParamFormatVersion = 1;

// Everything needed to rebuild a grammar and its scorer.
struct Model {
  SupportTreeConfig config;
  int vocab_size = 1;
  GrammarPolicy policy;
  Scorer scorer;

  Grammar MakeGrammar() const { return Grammar(config, vocab_size, policy); }
};

// Layout: one JSON header line
//   {"format_version", "src_len", "upsample", "depth", "vocab_size",
//    "closure", "emission", "scorer", "hidden_dim" (trilinear only), "rho",
//    "payload_count"}
// followed by payload_count little-endian IEEE-754 doubles, row-major:
//   tabular:   emission logits (m-1 x vocab), then child logits of
//              V_0..V_{m-1} in child_set order
//   trilinear: h (H x m), W_o (vocab x H), W_q, W_l, W_r (H x H)
std::string SerializeModel(const Model& model);
// Throws DataError for malformed input or shapes that do not fit the grammar.
Model DeserializeModel(const std::string& bytes);

void SaveModel(const Model& model, const std::string& path);
Model LoadModel(const std::string& path);

}  // namespace rhpcfg

#endif  // RHPCFG_PARAM_FILE_H_
