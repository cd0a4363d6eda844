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

#include "cli.h"

#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rhpcfg/corpus.h"
#include "test_util.h"

namespace rhpcfg {
namespace {

using json = nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
  std::vector<json> lines() const {
    std::vector<json> v;
    std::istringstream in(out);
    for (std::string l; std::getline(in, l);) v.push_back(json::parse(l));
    return v;
  }
};

Result Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

// Writes the vocab and a bimodal corpus into dir.
void WriteBimodal(const testing::TempDir& dir) {
  const Vocab v({"A", "B", "C"});
  SaveVocab(v, dir.path("vocab.txt"));
  SaveCorpus(MakeBimodal(v, {0, 1, 2}, {2, 1, 0}, 10, 1), dir.path("bi.jsonl"));
}

TEST_CASE("cli: info") {
  Result r = Run({"info", "--src-len", "3", "--lambda", "1", "--layers", "2"});
  CHECK(r.code == 0);
  json j = r.lines().at(0);
  CHECK(j["m"] == 14);
  CHECK(j["d"] == 4);
  CHECK(j["main_chain"] == json::array({1, 5, 9, 13}));
  CHECK(r.err.rfind("config: ", 0) == 0);

  r = Run({"info", "--src-len", "10", "--lambda", "4", "--layers", "1"});
  CHECK(r.lines().at(0)["m"] == 82);
  // Defaults are lambda 4, one layer.
  CHECK(Run({"info", "--src-len", "10"}).lines().at(0)["m"] == 82);

  r = Run({"info", "--src-len", "1", "--lambda", "1", "--layers", "1",
           "--closure", "on", "--emission", "leaf"});
  CHECK(r.code == cli::kData);
  CHECK(r.lines().at(0)["derivable"] == false);
}

TEST_CASE("cli: usage errors") {
  CHECK(Run({}).code == cli::kUsage);
  CHECK(Run({"info"}).code == cli::kUsage);
  CHECK(Run({"info", "--src-len", "3", "--closure", "maybe"}).code == cli::kUsage);
  CHECK(Run({"info", "--src-len", "0"}).code == cli::kUsage);
  CHECK(Run({"frobnicate"}).code == cli::kUsage);
  CHECK(Run({"--help"}).code == cli::kOk);
}

TEST_CASE("cli: train, then use the parameters") {
  testing::TempDir dir;
  WriteBimodal(dir);
  const std::vector<std::string> train = {
      "train", "--src-len", "3", "--lambda", "1", "--layers", "1",
      "--emission", "all", "--corpus", dir.path("bi.jsonl"), "--vocab",
      dir.path("vocab.txt"), "--iters", "20", "--seed", "3", "--params",
      dir.path("p.bin"), "--trace", dir.path("trace.csv")};
  Result r = Run(train);
  REQUIRE(r.code == 0);
  const auto lines = r.lines();
  REQUIRE(lines.size() == 21);
  for (size_t k = 1; k < lines.size(); ++k) {
    CHECK(lines[k]["corpus_loglik"].get<double>() -
              lines[k - 1]["corpus_loglik"].get<double>() >= -1e-9);
  }
  const std::string params = ReadFile(dir.path("p.bin"));
  const std::string trace = ReadFile(dir.path("trace.csv"));
  CHECK(trace.rfind("iteration,corpus_loglik\n", 0) == 0);

  // Same seed, same bytes.
  CHECK(Run(train).out == r.out);
  CHECK(ReadFile(dir.path("p.bin")) == params);
  CHECK(ReadFile(dir.path("trace.csv")) == trace);

  r = Run({"loglik", "--params", dir.path("p.bin"), "--vocab",
           dir.path("vocab.txt"), "--corpus", dir.path("bi.jsonl")});
  CHECK(r.code == 0);
  CHECK(r.lines().size() == 20);

  r = Run({"parse", "--params", dir.path("p.bin"), "--vocab",
           dir.path("vocab.txt"), "--corpus", dir.path("bi.jsonl"), "--dot-out",
           dir.path("t.dot")});
  CHECK(r.code == 0);
  for (const json& j : r.lines()) {
    CHECK(j["ratio"].get<double>() > 0.0);
    CHECK(j["ratio"].get<double>() <= 1.0);
    CHECK(j["alignment"].size() == 3);
  }
  CHECK(ReadFile(dir.path("t.dot")).find("digraph \"line_20\"") != std::string::npos);

  r = Run({"decode", "--params", dir.path("p.bin"), "--vocab",
           dir.path("vocab.txt"), "--length-min", "1", "--length-max", "8",
           "--rerank", "per_token"});
  CHECK(r.code == 0);
  const json d = r.lines().at(0);
  CHECK(d["tokens"].size() == d["length"].get<size_t>());
  CHECK(d["score"].get<double>() ==
        doctest::Approx(d["logprob"].get<double>() / d["length"].get<double>()));

  const std::vector<std::string> sample = {"sample", "--params", dir.path("p.bin"),
                                           "--count", "5", "--seed", "2"};
  r = Run(sample);
  CHECK(r.code == 0);
  CHECK(r.lines().size() == 5);
  CHECK(Run(sample).out == r.out);
}

TEST_CASE("cli: iters 0 leaves a one-line trace") {
  testing::TempDir dir;
  WriteBimodal(dir);
  const Result r = Run({"train", "--src-len", "3", "--lambda", "1", "--layers",
                        "1", "--emission", "all", "--corpus", dir.path("bi.jsonl"),
                        "--vocab", dir.path("vocab.txt"), "--iters", "0",
                        "--trace", dir.path("trace.csv")});
  CHECK(r.code == 0);
  CHECK(r.lines().size() == 1);
  const std::string trace = ReadFile(dir.path("trace.csv"));
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 2);
}

TEST_CASE("cli: data errors") {
  testing::TempDir dir;
  WriteBimodal(dir);
  // The corpus has length-3 lines; this grammar only derives up to 2 tokens.
  Result r = Run({"train", "--src-len", "1", "--lambda", "1", "--layers", "1",
                  "--emission", "all", "--closure", "on", "--corpus",
                  dir.path("bi.jsonl"), "--vocab", dir.path("vocab.txt")});
  CHECK(r.code == cli::kData);
  CHECK(r.err.find("corpus line 1") != std::string::npos);

  CHECK(Run({"loglik", "--params", dir.path("none.bin"), "--vocab",
             dir.path("vocab.txt"), "--corpus", dir.path("bi.jsonl")})
            .code == cli::kData);
  CHECK(Run({"train", "--src-len", "3", "--corpus", dir.path("none.jsonl"),
             "--vocab", dir.path("vocab.txt")})
            .code == cli::kData);
  CHECK(Run({"train", "--src-len", "3", "--corpus", dir.path("bi.jsonl"),
             "--vocab", dir.path("vocab.txt"), "--scorer", "trilinear"})
            .code == cli::kUsage);
}

TEST_CASE("cli: parse reports underivable lines and keeps going") {
  testing::TempDir dir;
  const Vocab v({"u", "w"});
  SaveVocab(v, dir.path("v.txt"));
  Corpus c;
  c.vocab = v;
  c.records = {{0, {0, 1}}, {0, {0, 1, 1}}, {0, {1}}};
  SaveCorpus(c, dir.path("c.jsonl"));
  const std::vector<std::string> grammar = {"--src-len", "1", "--lambda", "1",
                                            "--layers", "1", "--closure", "on",
                                            "--emission", "all"};
  std::vector<std::string> train = {"train", "--corpus", dir.path("c.jsonl"),
                                    "--vocab", dir.path("v.txt"), "--iters", "0",
                                    "--params", dir.path("p.bin")};
  train.insert(train.end(), grammar.begin(), grammar.end());
  // Line 2 cannot be derived, so training refuses the corpus.
  CHECK(Run(train).code == cli::kData);
  c.records.erase(c.records.begin() + 1);
  SaveCorpus(c, dir.path("ok.jsonl"));
  train[2] = dir.path("ok.jsonl");
  REQUIRE(Run(train).code == 0);

  const Result r = Run({"parse", "--params", dir.path("p.bin"), "--vocab",
                        dir.path("v.txt"), "--corpus", dir.path("c.jsonl")});
  CHECK(r.code == cli::kData);
  const auto lines = r.lines();
  REQUIRE(lines.size() == 3);
  // A single derivation per string in this grammar.
  CHECK(lines[0]["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lines[0]["alignment"] == json::array({1, 3}));
  CHECK(lines[1].contains("error"));
  CHECK(lines[1]["line"] == 2);
  CHECK(lines[2]["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  const Result ll = Run({"loglik", "--params", dir.path("p.bin"), "--vocab",
                         dir.path("v.txt"), "--corpus", dir.path("c.jsonl")});
  CHECK(ll.lines()[1]["derivable"] == false);
  CHECK(ll.lines()[1]["loglik"].is_null());
}

TEST_CASE("cli: oracle check") {
  const std::vector<std::string> args = {"oracle-check", "--seed", "5",
                                         "--instances", "16"};
  const Result r = Run(args);
  CHECK(r.code == 0);
  const auto lines = r.lines();
  CHECK(lines.back()["ok"] == true);
  for (size_t k = 0; k + 1 < lines.size(); ++k) {
    CHECK(lines[k]["max_deviation"].get<double>() <= 1e-9);
  }
  CHECK(Run(args).out == r.out);
  // An impossible tolerance turns into a property violation.
  CHECK(Run({"oracle-check", "--seed", "5", "--instances", "4", "--tolerance",
             "-1"}).code == cli::kPropertyViolation);
}

}  // namespace
}  // namespace rhpcfg
