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

#include "rhpcfg/param_file.h"

#include <bit>
#include <cstring>

#include "json.hpp"
#include "rhpcfg/corpus.h"
#include "rhpcfg/errors.h"

namespace rhpcfg {

using json = nlohmann::json;

namespace {

void PutDouble(std::string& out, double x) {
  const uint64_t bits = std::bit_cast<uint64_t>(x);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>(bits >> (8 * b)));
}

double GetDouble(const std::string& in, size_t pos) {
  uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) {
    bits |= static_cast<uint64_t>(static_cast<unsigned char>(in[pos + b]))
            << (8 * b);
  }
  return std::bit_cast<double>(bits);
}

void PutMatrix(std::vector<double>& out, const Eigen::MatrixXd& x) {
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) out.push_back(x(r, c));
  }
}

class Reader {
 public:
  explicit Reader(std::vector<double> v) : v_(std::move(v)) {}
  double Next() {
    if (pos_ >= v_.size()) throw DataError("parameter file: payload too short");
    return v_[pos_++];
  }
  Eigen::MatrixXd Matrix(long rows, long cols) {
    Eigen::MatrixXd x(rows, cols);
    for (long r = 0; r < rows; ++r) {
      for (long c = 0; c < cols; ++c) x(r, c) = Next();
    }
    return x;
  }
  bool done() const { return pos_ == v_.size(); }

 private:
  std::vector<double> v_;
  size_t pos_ = 0;
};

}  // namespace

std::string SerializeModel(const Model& model) {
  const Grammar grammar = model.MakeGrammar();
  std::vector<double> payload;
  std::vector<double> rho;
  json header;
  header["format_version"] = kParamFormatVersion;
  header["src_len"] = model.config.src_len;
  header["upsample"] = model.config.upsample;
  header["depth"] = model.config.depth;
  header["vocab_size"] = model.vocab_size;
  header["closure"] = model.policy.closure;
  header["emission"] = ToString(model.policy.emission);
  header["scorer"] = ScorerKind(model.scorer);
  if (const auto* t = std::get_if<TabularScorer>(&model.scorer)) {
    CheckScorer(grammar, *t);
    for (const auto& row : t->emit_logits) {
      payload.insert(payload.end(), row.begin(), row.end());
    }
    for (const auto& row : t->child_logits) {
      payload.insert(payload.end(), row.begin(), row.end());
    }
    rho = t->rho;
  } else {
    const auto& s = std::get<TrilinearScorer>(model.scorer);
    CheckScorer(grammar, s);
    header["hidden_dim"] = s.hidden_dim();
    for (const auto* x : {&s.h, &s.w_out, &s.w_q, &s.w_l, &s.w_r}) {
      PutMatrix(payload, *x);
    }
    rho = s.rho;
  }
  header["rho"] = rho;
  header["payload_count"] = payload.size();

  std::string out = header.dump() + "\n";
  out.reserve(out.size() + 8 * payload.size());
  for (double x : payload) PutDouble(out, x);
  return out;
}

Model DeserializeModel(const std::string& bytes) {
  const size_t eol = bytes.find('\n');
  if (eol == std::string::npos) throw DataError("parameter file: no header");
  json header;
  try {
    header = json::parse(bytes.substr(0, eol));
  } catch (const json::parse_error&) {
    throw DataError("parameter file: malformed header");
  }
  try {
    if (header.at("format_version").get<int>() != kParamFormatVersion) {
      throw DataError("parameter file: unsupported format_version " +
                      header.at("format_version").dump());
    }
    Model model;
    model.config.src_len = header.at("src_len").get<int>();
    model.config.upsample = header.at("upsample").get<int>();
    model.config.depth = header.at("depth").get<int>();
    model.vocab_size = header.at("vocab_size").get<int>();
    model.policy.closure = header.at("closure").get<bool>();
    model.policy.emission = ParseEmission(header.at("emission").get<std::string>());
    const auto rho = header.at("rho").get<std::vector<double>>();
    const size_t count = header.at("payload_count").get<size_t>();
    if (bytes.size() - eol - 1 != 8 * count) {
      throw DataError("parameter file: payload size does not match header");
    }
    std::vector<double> values(count);
    for (size_t i = 0; i < count; ++i) values[i] = GetDouble(bytes, eol + 1 + 8 * i);
    Reader in(std::move(values));

    const Grammar grammar = model.MakeGrammar();
    const int m = grammar.num_nonterminals();
    const std::string kind = header.at("scorer").get<std::string>();
    if (kind == "tabular") {
      TabularScorer s;
      s.emit_logits.assign(m - 1, std::vector<double>(model.vocab_size));
      for (auto& row : s.emit_logits) {
        for (double& x : row) x = in.Next();
      }
      s.child_logits.resize(m);
      for (int i = 0; i < m; ++i) {
        s.child_logits[i].resize(grammar.child_set(i).size());
        for (double& x : s.child_logits[i]) x = in.Next();
      }
      s.rho = rho;
      CheckScorer(grammar, s);
      model.scorer = std::move(s);
    } else if (kind == "trilinear") {
      const int hd = header.at("hidden_dim").get<int>();
      if (hd < 1) throw DataError("parameter file: hidden_dim must be >= 1");
      TrilinearScorer s;
      s.h = in.Matrix(hd, m);
      s.w_out = in.Matrix(model.vocab_size, hd);
      s.w_q = in.Matrix(hd, hd);
      s.w_l = in.Matrix(hd, hd);
      s.w_r = in.Matrix(hd, hd);
      s.rho = rho;
      CheckScorer(grammar, s);
      model.scorer = std::move(s);
    } else {
      throw DataError("parameter file: unknown scorer '" + kind + "'");
    }
    if (!in.done()) throw DataError("parameter file: trailing payload");
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("parameter file: bad header field: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("parameter file: ") + e.what());
  }
}

void SaveModel(const Model& model, const std::string& path) {
  WriteFileAtomic(path, SerializeModel(model));
}

Model LoadModel(const std::string& path) {
  return DeserializeModel(ReadFile(path));
}

}  // namespace rhpcfg
