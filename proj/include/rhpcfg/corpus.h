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

#ifndef RHPCFG_CORPUS_H_
#define RHPCFG_CORPUS_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rhpcfg/chart.h"

namespace rhpcfg {

// Token strings; the id of a token is its line number in the vocab file.
class Vocab {
 public:
  Vocab() = default;
  // Throws std::invalid_argument on duplicate or empty tokens.
  explicit Vocab(std::vector<std::string> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(Token id) const { return tokens_.at(id); }
  // -1 when absent.
  Token Find(const std::string& s) const;
  // Throws DataError naming the unknown token.
  std::vector<Token> Encode(const std::vector<std::string>& words) const;

  bool operator==(const Vocab& o) const { return tokens_ == o.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Token> index_;
};

struct Record {
  int64_t context = 0;  // stand-in for the source sentence
  Sentence tokens;
  bool operator==(const Record&) const = default;
};

struct Corpus {
  std::vector<Record> records;
  Vocab vocab;

  std::vector<Sentence> Sentences() const;
  bool operator==(const Corpus&) const = default;
};

// Vocabulary file: UTF-8, one token per line.
Vocab LoadVocab(const std::string& path);
void SaveVocab(const Vocab& vocab, const std::string& path);

// Corpus file: one JSON object per line, {"context": int, "target": [str]}.
// Errors carry the 1-based line number.
Corpus ParseCorpus(const std::string& text, const Vocab& vocab);
std::string FormatCorpus(const Corpus& corpus);
Corpus LoadCorpus(const std::string& path, const Vocab& vocab);
void SaveCorpus(const Corpus& corpus, const std::string& path);

// n_each copies of each mode under context 0, shuffled with the seed.
Corpus MakeBimodal(const Vocab& vocab, const Sentence& mode_a,
                   const Sentence& mode_b, int n_each, uint64_t seed);

// Writes via a sibling temporary file and rename.
void WriteFileAtomic(const std::string& path, const std::string& bytes);
std::string ReadFile(const std::string& path);

}  // namespace rhpcfg

#endif  // RHPCFG_CORPUS_H_
