// Copyright 2026 The copyctl Authors.
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

#include <cmath>
#include <fstream>
#include <sstream>

#include "copyctl/step_model.hpp"
#include "json.hpp"

namespace copyctl {

using nlohmann::json;

StepOutput CheckedStep(const StepModel& model, const SourceDocument& doc,
                       std::span<const TokenId> prefix) {
  StepOutput out = model.Step(doc, prefix);
  try {
    ValidateStepOutput(out, model.vocabulary().size(), doc.length());
  } catch (const ValidationError& e) {
    std::string rendered;
    for (TokenId id : prefix) {
      if (!rendered.empty()) rendered += ' ';
      try {
        rendered += doc.token_string(model.vocabulary(), id);
      } catch (const std::out_of_range&) {
        rendered += "#" + std::to_string(id);
      }
    }
    const int step = static_cast<int>(prefix.size());
    throw ModelOutputError("doc '" + doc.doc_id + "', step " +
                               std::to_string(step) + ", prefix '" + rendered +
                               "': " + e.what(),
                           step, rendered);
  }
  return out;
}

ScriptedModel::ScriptedModel(Vocabulary vocab,
                             std::vector<SourceDocument> sources,
                             Default fallback)
    : vocab_(std::move(vocab)), default_(std::move(fallback)) {
  for (auto& doc : sources) {
    std::string id = doc.doc_id;
    if (!sources_.emplace(id, std::move(doc)).second) {
      throw ValidationError("duplicate source '" + id + "'");
    }
  }
  if (sources_.empty()) throw ValidationError("scripted model declares no sources");
  for (const auto& [id, doc] : sources_) {
    StepOutput probe{default_.p_gen,
                     std::vector<double>(doc.length(), 1.0 / doc.length()),
                     default_.m};
    try {
      ValidateStepOutput(probe, vocab_.size(), doc.length());
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("default entry: ") + e.what());
    }
  }
}

void ScriptedModel::AddEntry(const std::string& doc_id,
                             std::vector<TokenId> prefix, StepOutput output) {
  const SourceDocument& doc = source(doc_id);
  if (prefix.empty() || prefix.front() != kBos) {
    throw ValidationError("entry prefix must start with " + std::string(kBosToken));
  }
  ValidateStepOutput(output, vocab_.size(), doc.length());
  if (!entries_[doc_id].emplace(std::move(prefix), std::move(output)).second) {
    throw ValidationError("duplicate entry for doc '" + doc_id + "'");
  }
}

const SourceDocument& ScriptedModel::source(const std::string& doc_id) const {
  auto it = sources_.find(doc_id);
  if (it == sources_.end()) {
    throw ValidationError("unknown source document '" + doc_id + "'");
  }
  return it->second;
}

std::size_t ScriptedModel::entry_count() const {
  std::size_t n = 0;
  for (const auto& [id, table] : entries_) n += table.size();
  return n;
}

StepOutput ScriptedModel::Step(const SourceDocument& doc,
                               std::span<const TokenId> prefix) const {
  if (auto table = entries_.find(doc.doc_id); table != entries_.end()) {
    std::vector<TokenId> key(prefix.begin(), prefix.end());
    if (auto hit = table->second.find(key); hit != table->second.end()) {
      return hit->second;
    }
  }
  const std::size_t n = doc.length();
  return StepOutput{default_.p_gen,
                    std::vector<double>(n, n ? 1.0 / n : 0.0), default_.m};
}

namespace {

std::string DescribePrefix(const json& prefix) {
  std::string out;
  for (const auto& token : prefix) {
    if (!out.empty()) out += ' ';
    out += token.get<std::string>();
  }
  return out;
}

// Renormalizes `values` when within tolerance of unit mass.
void Renormalize(std::vector<double>& values, const std::string& what) {
  double total = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError(what + ": negative or non-finite probability");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kModelMassTolerance) {
    std::ostringstream os;
    os.precision(10);
    os << what << ": mass " << total << " differs from 1 by more than "
       << kModelMassTolerance;
    throw ValidationError(os.str());
  }
  for (double& v : values) v /= total;
}

std::vector<double> DenseGen(const Vocabulary& vocab, const json& table,
                             const std::string& what) {
  if (!table.is_object()) throw FormatError(what + ": p_gen must be an object");
  std::vector<double> dense(vocab.size(), 0.0);
  for (const auto& [token, prob] : table.items()) {
    if (!vocab.contains(token)) {
      throw ValidationError(what + ": p_gen token '" + token +
                            "' is not in gen_vocab");
    }
    dense[vocab.id(token)] += prob.get<double>();
  }
  Renormalize(dense, what + " p_gen");
  return dense;
}

void CheckMixture(double m, const std::string& what) {
  if (!(m >= 0.0 && m <= 1.0)) {
    throw ValidationError(what + ": m = " + std::to_string(m) +
                          " outside [0, 1]");
  }
}

ScriptedModel Build(const json& root) {
  if (!root.is_object()) throw FormatError("scripted model must be a JSON object");
  for (const char* key : {"gen_vocab", "sources", "default"}) {
    if (!root.contains(key)) throw FormatError(std::string("missing key '") + key + "'");
  }
  Vocabulary vocab(root.at("gen_vocab").get<std::vector<std::string>>());

  std::vector<SourceDocument> sources;
  for (const auto& [id, tokens] : root.at("sources").items()) {
    sources.push_back(
        ExtendVocabulary(vocab, tokens.get<std::vector<std::string>>(), id));
  }

  const json& fallback = root.at("default");
  const std::string mode = fallback.value("alpha_mode", std::string("uniform"));
  if (mode != "uniform") {
    throw ValidationError("default: alpha_mode '" + mode + "' is not supported");
  }
  ScriptedModel::Default def;
  def.p_gen = DenseGen(vocab, fallback.at("p_gen"), "default");
  def.m = fallback.at("m").get<double>();
  CheckMixture(def.m, "default");
  ScriptedModel model(vocab, std::move(sources), std::move(def));

  if (!root.contains("entries")) return model;
  const json& entries = root.at("entries");
  if (!entries.is_array()) throw FormatError("'entries' must be a list");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const json& entry = entries[k];
    const std::string doc_id = entry.at("doc_id").get<std::string>();
    const std::string what = "entries[" + std::to_string(k) + "] (doc '" +
                             doc_id + "', prefix '" +
                             DescribePrefix(entry.at("prefix")) + "')";
    const SourceDocument* doc = nullptr;
    try {
      doc = &model.source(doc_id);
    } catch (const ValidationError&) {
      throw ValidationError(what + ": unknown doc_id");
    }
    std::vector<TokenId> prefix;
    const auto tokens = entry.at("prefix").get<std::vector<std::string>>();
    if (tokens.empty() || tokens.front() != kBosToken) prefix.push_back(kBos);
    for (const auto& token : tokens) {
      const TokenId id = doc->extended_id(vocab, token);
      if (id == kUnk && token != kUnkToken) {
        throw ValidationError(what + ": prefix token '" + token +
                              "' is neither in gen_vocab nor in the source");
      }
      prefix.push_back(id);
    }
    StepOutput out;
    out.p_gen = DenseGen(vocab, entry.at("p_gen"), what);
    out.alpha = entry.at("alpha").get<std::vector<double>>();
    if (out.alpha.size() != doc->length()) {
      throw ValidationError(what + ": alpha has " +
                            std::to_string(out.alpha.size()) +
                            " entries, source has " +
                            std::to_string(doc->length()));
    }
    Renormalize(out.alpha, what + " alpha");
    out.m = entry.at("m").get<double>();
    CheckMixture(out.m, what);
    try {
      model.AddEntry(doc_id, std::move(prefix), std::move(out));
    } catch (const ValidationError& e) {
      throw ValidationError(what + ": " + e.what());
    }
  }
  return model;
}

}  // namespace

ScriptedModel ParseScripted(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("scripted model: ") + e.what());
  }
  try {
    return Build(root);
  } catch (const json::exception& e) {
    throw FormatError(std::string("scripted model: ") + e.what());
  }
}

ScriptedModel LoadScripted(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open scripted model " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseScripted(buffer.str());
}

}  // namespace copyctl
