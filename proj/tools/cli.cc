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

#include <cmath>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "rhpcfg/chart.h"
#include "rhpcfg/corpus.h"
#include "rhpcfg/decode.h"
#include "rhpcfg/errors.h"
#include "rhpcfg/param_file.h"
#include "rhpcfg/sampler.h"
#include "rhpcfg/train.h"
#include "rhpcfg/verify.h"

namespace rhpcfg::cli {

namespace {

using json = nlohmann::json;

struct GrammarFlags {
  int src_len = 0;
  int lambda = 4;
  int layers = 1;
  std::string closure = "off";
  std::string emission = "leaf";

  void Register(CLI::App* app) {
    app->add_option("--src-len", src_len, "source length L_x")->required();
    app->add_option("--lambda", lambda, "upsample ratio")->capture_default_str();
    app->add_option("--layers", layers, "local prefix tree depth")
        ->capture_default_str();
    app->add_option("--closure", closure, "main-chain closure in right reach")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app->add_option("--emission", emission, "who may use V_i -> a")
        ->check(CLI::IsMember({"leaf", "all"}))
        ->capture_default_str();
  }

  SupportTreeConfig config() const {
    SupportTreeConfig c{src_len, lambda, layers};
    c.Validate();
    return c;
  }
  GrammarPolicy policy() const {
    return GrammarPolicy{closure == "on", ParseEmission(emission)};
  }
};

// Anything the user can fix by changing flags.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json GrammarJson(const SupportTreeConfig& c, const GrammarPolicy& p,
                 int vocab_size) {
  return json{{"src_len", c.src_len},
              {"lambda", c.upsample},
              {"layers", c.depth},
              {"closure", p.closure ? "on" : "off"},
              {"emission", ToString(p.emission)},
              {"vocab_size", vocab_size}};
}

json LogValue(double x) { return x == kNegInf ? json(nullptr) : json(x); }

json TokenList(const std::vector<Token>& ys, const Vocab* vocab) {
  json out = json::array();
  for (Token t : ys) {
    if (vocab) {
      out.push_back(vocab->token(t));
    } else {
      out.push_back(t);
    }
  }
  return out;
}

void PrintConfig(std::ostream& err, const std::string& command, json cfg) {
  cfg["command"] = command;
  err << "config: " << cfg.dump() << "\n";
}

struct ModelContext {
  Model model;
  Grammar grammar;
  RuleTable table;
  std::optional<Vocab> vocab;
};

ModelContext LoadContext(const std::string& params_path,
                         const std::string& vocab_path, bool vocab_required) {
  if (params_path.empty()) throw UsageError("--params is required");
  Model model = LoadModel(params_path);
  Grammar grammar = model.MakeGrammar();
  RuleTable table = MakeRuleTable(grammar, model.scorer);
  std::optional<Vocab> vocab;
  if (!vocab_path.empty()) {
    vocab = LoadVocab(vocab_path);
    if (vocab->size() != model.vocab_size) {
      throw DataError("vocabulary has " + std::to_string(vocab->size()) +
                      " tokens but the parameter file expects " +
                      std::to_string(model.vocab_size));
    }
  } else if (vocab_required) {
    throw UsageError("--vocab is required");
  }
  return {std::move(model), std::move(grammar), std::move(table),
          std::move(vocab)};
}

json ModelConfig(const ModelContext& ctx, const std::string& params) {
  json cfg = GrammarJson(ctx.model.config, ctx.model.policy,
                         ctx.model.vocab_size);
  cfg["scorer"] = ScorerKind(ctx.model.scorer);
  cfg["params"] = params;
  return cfg;
}

int CmdInfo(const GrammarFlags& gf, int vocab_size, std::ostream& out,
            std::ostream& err) {
  const Grammar g(gf.config(), vocab_size, gf.policy());
  PrintConfig(err, "info", GrammarJson(g.tree().config(), g.policy(), vocab_size));
  const GrammarReport& r = g.report();
  json res{{"m", g.num_nonterminals()},
           {"d", g.prefix_width()},
           {"main_chain", g.tree().main_chain()},
           {"rule_space", g.rule_space_size()},
           {"derivable", !r.degenerate()}};
  if (!r.degenerate()) {
    res["min_len"] = r.min_len[1];
    res["max_len"] = r.max_len[1];
  }
  out << res.dump() << "\n";
  if (r.degenerate()) {
    err << "error: V_1 derives no terminal string under this policy\n";
    return kData;
  }
  return kOk;
}

struct TrainFlags {
  std::string corpus, vocab, params, trace;
  std::string algo = "em";
  std::string scorer = "tabular";
  int iters = 20;
  double lr = 1e-2;
  int hidden_dim = 8;
  uint64_t seed = 1;
};

int CmdTrain(const GrammarFlags& gf, const TrainFlags& tf, std::ostream& out,
             std::ostream& err) {
  const Vocab vocab = LoadVocab(tf.vocab);
  const Corpus corpus = LoadCorpus(tf.corpus, vocab);
  const Grammar g(gf.config(), vocab.size(), gf.policy());
  TrainOptions opts;
  opts.algo = ParseTrainAlgo(tf.algo);
  opts.iters = tf.iters;
  opts.lr = tf.lr;
  if (opts.algo == TrainAlgo::kEm && tf.scorer != "tabular") {
    throw UsageError("--algo em requires --scorer tabular");
  }
  json cfg = GrammarJson(g.tree().config(), g.policy(), vocab.size());
  cfg.update(json{{"algo", tf.algo}, {"scorer", tf.scorer}, {"iters", tf.iters},
                  {"lr", tf.lr}, {"seed", tf.seed}, {"corpus", tf.corpus},
                  {"params", tf.params}, {"trace", tf.trace}});
  if (tf.scorer == "trilinear") cfg["hidden_dim"] = tf.hidden_dim;
  PrintConfig(err, "train", cfg);
  if (g.report().degenerate()) throw DataError("grammar is degenerate");

  Scorer init;
  if (tf.scorer == "tabular") {
    init = TabularScorer::Random(g, tf.seed, 1.0);
  } else {
    init = TrilinearScorer::Random(g, tf.hidden_dim, tf.seed, 0.5);
  }
  const std::vector<Sentence> sentences = corpus.Sentences();
  for (size_t s = 0; s < sentences.size(); ++s) {
    if (sentences[s].empty()) {
      throw DataError("corpus line " + std::to_string(s + 1) + ": empty target");
    }
  }
  TrainResult result;
  try {
    result = Train(g, init, sentences, opts);
  } catch (const UnderivableError& e) {
    throw DataError("corpus line " + std::to_string(*e.index() + 1) +
                    ": sentence has no derivation under this grammar");
  }

  std::string csv = "iteration,corpus_loglik\n";
  for (size_t t = 0; t < result.trace.size(); ++t) {
    out << json{{"iteration", t}, {"corpus_loglik", result.trace[t]}}.dump()
        << "\n";
    csv += std::to_string(t) + "," + json(result.trace[t]).dump() + "\n";
  }
  if (!tf.trace.empty()) WriteFileAtomic(tf.trace, csv);
  if (!tf.params.empty()) {
    SaveModel(Model{g.tree().config(), g.vocab_size(), g.policy(),
                    std::move(result.scorer)},
              tf.params);
  }
  return kOk;
}

int CmdLoglik(const std::string& params, const std::string& vocab_path,
              const std::string& corpus_path, std::ostream& out,
              std::ostream& err) {
  const ModelContext ctx = LoadContext(params, vocab_path, true);
  PrintConfig(err, "loglik", ModelConfig(ctx, params));
  const Corpus corpus = LoadCorpus(corpus_path, *ctx.vocab);
  int status = kOk;
  for (size_t s = 0; s < corpus.records.size(); ++s) {
    json res{{"line", s + 1}};
    try {
      const double ll = LogLikelihood(ctx.grammar, ctx.table, corpus.records[s].tokens);
      res["loglik"] = LogValue(ll);
      res["derivable"] = ll != kNegInf;
    } catch (const std::invalid_argument& e) {
      res["error"] = e.what();
      status = kData;
    }
    out << res.dump() << "\n";
  }
  return status;
}

int CmdParse(const std::string& params, const std::string& vocab_path,
             const std::string& corpus_path, const std::string& dot_out,
             std::ostream& out, std::ostream& err) {
  const ModelContext ctx = LoadContext(params, vocab_path, true);
  json cfg = ModelConfig(ctx, params);
  cfg["dot_out"] = dot_out;
  PrintConfig(err, "parse", cfg);
  const Corpus corpus = LoadCorpus(corpus_path, *ctx.vocab);
  const auto* words = &ctx.vocab->tokens();
  std::string dot;
  int status = kOk;
  for (size_t s = 0; s < corpus.records.size(); ++s) {
    const Sentence& y = corpus.records[s].tokens;
    json res{{"line", s + 1}};
    try {
      const double ll = LogLikelihood(ctx.grammar, ctx.table, y);
      if (ll == kNegInf) throw UnderivableError("sentence has no derivation");
      const ParseTree best = BestParse(ctx.grammar, ctx.table, y);
      res["loglik"] = ll;
      res["best_logprob"] = best.log_prob;
      res["ratio"] = std::min(1.0, std::exp(best.log_prob - ll));
      res["alignment"] = best.alignment;
      res["tree"] = RenderText(best, words);
      dot += RenderDot(best, "line_" + std::to_string(s + 1), words);
    } catch (const std::exception& e) {
      res["error"] = e.what();
      status = kData;
    }
    out << res.dump() << "\n";
  }
  if (!dot_out.empty()) WriteFileAtomic(dot_out, dot);
  return status;
}

int CmdDecode(const std::string& params, const std::string& vocab_path,
              int min_len, int max_len, const std::string& rerank,
              std::ostream& out, std::ostream& err) {
  const ModelContext ctx = LoadContext(params, vocab_path, false);
  if (ctx.grammar.report().degenerate()) throw DataError("grammar is degenerate");
  if (max_len <= 0) max_len = ctx.grammar.report().max_len[1];
  json cfg = ModelConfig(ctx, params);
  cfg.update(json{{"length_min", min_len}, {"length_max", max_len},
                  {"rerank", rerank}});
  PrintConfig(err, "decode", cfg);
  if (min_len < 1 || min_len > max_len) {
    throw UsageError("need 1 <= --length-min <= --length-max");
  }
  const Candidate c =
      Decode(ctx.grammar, ctx.table, min_len, max_len, ParseRerank(rerank));
  const Vocab* vocab = ctx.vocab ? &*ctx.vocab : nullptr;
  out << json{{"length", c.length},
              {"score", c.score},
              {"logprob", c.tree.log_prob},
              {"tokens", TokenList(c.tree.yield, vocab)},
              {"alignment", c.tree.alignment}}
             .dump()
      << "\n";
  return kOk;
}

int CmdSample(const std::string& params, const std::string& vocab_path,
              int count, uint64_t seed, std::ostream& out, std::ostream& err) {
  const ModelContext ctx = LoadContext(params, vocab_path, false);
  json cfg = ModelConfig(ctx, params);
  cfg.update(json{{"count", count}, {"seed", seed}});
  PrintConfig(err, "sample", cfg);
  if (ctx.grammar.report().degenerate()) throw DataError("grammar is degenerate");
  Rng rng(seed);
  const Vocab* vocab = ctx.vocab ? &*ctx.vocab : nullptr;
  for (int i = 0; i < count; ++i) {
    const ParseTree t = SampleTree(ctx.grammar, ctx.table, rng);
    out << json{{"sample", i}, {"tokens", TokenList(t.yield, vocab)},
                {"logprob", t.log_prob}}
               .dump()
        << "\n";
  }
  return kOk;
}

int CmdOracleCheck(uint64_t seed, int instances, double tol, std::ostream& out,
                   std::ostream& err) {
  PrintConfig(err, "oracle-check",
              json{{"seed", seed}, {"instances", instances}, {"tolerance", tol}});
  if (instances < 1) throw UsageError("--instances must be >= 1");
  const SuiteReport rep = RunEquivalenceSuite(seed, instances);
  for (const auto& line : rep.Lines(tol)) {
    out << json{{"property", line.property},
                {"max_deviation", line.value},
                {"tolerance", line.tolerance},
                {"ok", line.ok()}}
               .dump()
        << "\n";
  }
  out << json{{"instances", rep.instances}, {"sentences", rep.sentences},
              {"ok", rep.ok(tol)}}
             .dump()
      << "\n";
  err << "oracle-check: " << rep.seconds << " s\n";
  return rep.ok(tol) ? kOk : kPropertyViolation;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Right-heavy PCFG toolkit", "rhpcfg"};
  app.require_subcommand(1);

  GrammarFlags info_grammar;
  int info_vocab = 1;
  auto* info = app.add_subcommand("info", "support tree and rule space report");
  info_grammar.Register(info);
  info->add_option("--vocab-size", info_vocab, "terminal count")
      ->capture_default_str();

  GrammarFlags train_grammar;
  TrainFlags tf;
  auto* train = app.add_subcommand("train", "fit a scorer to a corpus");
  train_grammar.Register(train);
  train->add_option("--corpus", tf.corpus)->required();
  train->add_option("--vocab", tf.vocab)->required();
  train->add_option("--params", tf.params, "output parameter file");
  train->add_option("--trace", tf.trace, "output CSV trace");
  train->add_option("--algo", tf.algo)
      ->check(CLI::IsMember({"em", "sgd"}))
      ->capture_default_str();
  train->add_option("--scorer", tf.scorer)
      ->check(CLI::IsMember({"tabular", "trilinear"}))
      ->capture_default_str();
  train->add_option("--iters", tf.iters)->capture_default_str();
  train->add_option("--lr", tf.lr)->capture_default_str();
  train->add_option("--hidden-dim", tf.hidden_dim)->capture_default_str();
  train->add_option("--seed", tf.seed)->capture_default_str();

  std::string params, vocab, corpus, dot_out, rerank = "per_token";
  int min_len = 1, max_len = 0, count = 1, instances = 200;
  uint64_t seed = 1;
  double tol = 1e-9;

  auto* loglik = app.add_subcommand("loglik", "log-likelihood per corpus line");
  auto* parse = app.add_subcommand("parse", "best parse per corpus line");
  auto* decode = app.add_subcommand("decode", "Viterbi decoding over lengths");
  auto* sample = app.add_subcommand("sample", "ancestral samples");
  auto* oracle = app.add_subcommand("oracle-check",
                                    "dynamic programs vs enumeration oracle");
  for (auto* sub : {loglik, parse, decode, sample}) {
    sub->add_option("--params", params)->required();
    sub->add_option("--vocab", vocab);
  }
  for (auto* sub : {loglik, parse}) sub->add_option("--corpus", corpus)->required();
  parse->add_option("--dot-out", dot_out, "write best parses as DOT");
  decode->add_option("--length-min", min_len)->capture_default_str();
  decode->add_option("--length-max", max_len,
                     "defaults to the longest derivable length");
  decode->add_option("--rerank", rerank)
      ->check(CLI::IsMember({"raw", "per_token"}))
      ->capture_default_str();
  sample->add_option("--count", count)->capture_default_str();
  sample->add_option("--seed", seed)->capture_default_str();
  oracle->add_option("--seed", seed)->capture_default_str();
  oracle->add_option("--instances", instances)->capture_default_str();
  oracle->add_option("--tolerance", tol)->capture_default_str();

  std::vector<const char*> argv{"rhpcfg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*info) return CmdInfo(info_grammar, info_vocab, out, err);
    if (*train) return CmdTrain(train_grammar, tf, out, err);
    if (*loglik) return CmdLoglik(params, vocab, corpus, out, err);
    if (*parse) return CmdParse(params, vocab, corpus, dot_out, out, err);
    if (*decode) return CmdDecode(params, vocab, min_len, max_len, rerank, out, err);
    if (*sample) return CmdSample(params, vocab, count, seed, out, err);
    if (*oracle) return CmdOracleCheck(seed, instances, tol, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

}  // namespace rhpcfg::cli
