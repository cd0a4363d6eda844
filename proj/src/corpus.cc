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

#include "rhpcfg/corpus.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rhpcfg/errors.h"
#include "rhpcfg/random.h"

namespace rhpcfg {

using json = nlohmann::json;

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) {
      throw std::invalid_argument("vocab: empty token at line " +
                                  std::to_string(i + 1));
    }
    if (!index_.emplace(tokens_[i], static_cast<Token>(i)).second) {
      throw std::invalid_argument("vocab: duplicate token '" + tokens_[i] +
                                  "' at line " + std::to_string(i + 1));
    }
  }
}

Token Vocab::Find(const std::string& s) const {
  const auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

std::vector<Token> Vocab::Encode(const std::vector<std::string>& words) const {
  std::vector<Token> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    const Token t = Find(w);
    if (t < 0) throw DataError("unknown token '" + w + "'");
    out.push_back(t);
  }
  return out;
}

std::vector<Sentence> Corpus::Sentences() const {
  std::vector<Sentence> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.tokens);
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomic(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("short write to '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot rename '" + tmp + "': " + ec.message());
}

namespace {

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur)) {
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  return lines;
}

}  // namespace

Vocab LoadVocab(const std::string& path) {
  std::vector<std::string> lines = SplitLines(ReadFile(path));
  try {
    return Vocab(std::move(lines));
  } catch (const std::invalid_argument& e) {
    throw DataError(path + ": " + e.what());
  }
}

void SaveVocab(const Vocab& vocab, const std::string& path) {
  std::string out;
  for (const auto& t : vocab.tokens()) out += t + "\n";
  WriteFileAtomic(path, out);
}

Corpus ParseCorpus(const std::string& text, const Vocab& vocab) {
  Corpus c;
  c.vocab = vocab;
  const auto lines = SplitLines(text);
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string where = "corpus line " + std::to_string(ln + 1) + ": ";
    if (lines[ln].empty()) continue;
    json obj;
    try {
      obj = json::parse(lines[ln]);
    } catch (const json::parse_error& e) {
      throw DataError(where + "malformed JSON");
    }
    if (!obj.is_object() || !obj.contains("context") ||
        !obj.contains("target") || !obj["context"].is_number_integer() ||
        !obj["target"].is_array()) {
      throw DataError(where + "expected {\"context\": int, \"target\": [...]}");
    }
    Record r;
    r.context = obj["context"].get<int64_t>();
    if (r.context < 0) throw DataError(where + "negative context id");
    for (const auto& w : obj["target"]) {
      if (!w.is_string()) throw DataError(where + "target entries must be strings");
      const Token t = vocab.Find(w.get<std::string>());
      if (t < 0) {
        throw DataError(where + "unknown token '" + w.get<std::string>() + "'");
      }
      r.tokens.push_back(t);
    }
    c.records.push_back(std::move(r));
  }
  return c;
}

std::string FormatCorpus(const Corpus& corpus) {
  std::string out;
  for (const auto& r : corpus.records) {
    json words = json::array();
    for (Token t : r.tokens) words.push_back(corpus.vocab.token(t));
    json obj{{"context", r.context}, {"target", std::move(words)}};
    out += obj.dump() + "\n";
  }
  return out;
}

Corpus LoadCorpus(const std::string& path, const Vocab& vocab) {
  try {
    return ParseCorpus(ReadFile(path), vocab);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void SaveCorpus(const Corpus& corpus, const std::string& path) {
  WriteFileAtomic(path, FormatCorpus(corpus));
}

Corpus MakeBimodal(const Vocab& vocab, const Sentence& mode_a,
                   const Sentence& mode_b, int n_each, uint64_t seed) {
  if (mode_a.empty() || mode_b.empty()) {
    throw std::invalid_argument("bimodal: modes must be non-empty");
  }
  if (n_each < 0) throw std::invalid_argument("bimodal: n_each must be >= 0");
  for (const Sentence* mode : {&mode_a, &mode_b}) {
    for (Token t : *mode) {
      if (t < 0 || t >= vocab.size()) {
        throw std::invalid_argument("bimodal: token outside vocabulary");
      }
    }
  }
  Corpus c;
  c.vocab = vocab;
  for (int i = 0; i < n_each; ++i) c.records.push_back({0, mode_a});
  for (int i = 0; i < n_each; ++i) c.records.push_back({0, mode_b});
  Rng rng(seed);
  rng.Shuffle(c.records);
  return c;
}

}  // namespace rhpcfg
