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

#ifndef COPYCTL_STEP_MODEL_HPP_
#define COPYCTL_STEP_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "copyctl/core.hpp"

namespace copyctl {

// Decoder step contract. Implementations are immutable and Step is a pure
// function of (doc, prefix); the prefix is the state handle.
class StepModel {
 public:
  virtual ~StepModel() = default;

  virtual const Vocabulary& vocabulary() const = 0;

  std::vector<TokenId> Init(const SourceDocument&) const { return {kBos}; }

  // `prefix` starts with kBos; the returned output is for the next token.
  virtual StepOutput Step(const SourceDocument& doc,
                          std::span<const TokenId> prefix) const = 0;
};

// Calls model.Step and enforces the StepOutput contract, raising
// ModelOutputError with the step index and rendered prefix on violation.
StepOutput CheckedStep(const StepModel& model, const SourceDocument& doc,
                       std::span<const TokenId> prefix);

// Table-driven model: exact (doc_id, prefix) lookup with a mandatory default.
class ScriptedModel final : public StepModel {
 public:
  struct Default {
    std::vector<double> p_gen;  // dense over the vocabulary
    double m = 1.0;             // alpha is always uniform
  };

  ScriptedModel(Vocabulary vocab, std::vector<SourceDocument> sources,
                Default fallback);

  // Entry prefixes are extended-id sequences starting with kBos. The output
  // must satisfy the StepOutput contract for the named source.
  void AddEntry(const std::string& doc_id, std::vector<TokenId> prefix,
                StepOutput output);

  const Vocabulary& vocabulary() const override { return vocab_; }
  StepOutput Step(const SourceDocument& doc,
                  std::span<const TokenId> prefix) const override;

  // Source documents declared by the model, keyed by id.
  const std::map<std::string, SourceDocument>& sources() const { return sources_; }
  const SourceDocument& source(const std::string& doc_id) const;
  std::size_t entry_count() const;

 private:
  Vocabulary vocab_;
  std::map<std::string, SourceDocument> sources_;
  std::map<std::string, std::map<std::vector<TokenId>, StepOutput>> entries_;
  Default default_;
};

// Parses the scripted model format (JSON text). Throws FormatError on
// malformed input and ValidationError naming the entry on contract
// violations. Tables within 1e-6 of unit mass are renormalized.
ScriptedModel ParseScripted(const std::string& text);
ScriptedModel LoadScripted(const std::filesystem::path& path);

struct SyntheticParams {
  std::uint64_t seed = 42;
  double p_switch = 0.15;
  double m_copy = 0.05;
  double m_gen = 0.8;
  double attn_peak = 0.9;
  int vocab_size = 50;
};

// Procedural copy-biased model. Each step is a generation step with
// probability p_switch, otherwise a copy step that puts attn_peak of the
// attention on a cursor advancing through the source. The branch draw is
// keyed by (seed, doc_id, prefix length, last token) so sibling hypotheses
// see different mixture coefficients.
class SyntheticCopyModel final : public StepModel {
 public:
  explicit SyntheticCopyModel(SyntheticParams params);

  const Vocabulary& vocabulary() const override { return vocab_; }
  const SyntheticParams& params() const { return params_; }
  StepOutput Step(const SourceDocument& doc,
                  std::span<const TokenId> prefix) const override;

 private:
  SyntheticParams params_;
  Vocabulary vocab_;
  std::vector<double> unigram_;
  std::vector<double> uniform_;
};

// Token strings of the synthetic vocabulary: w0 .. w{vocab_size-1}.
std::vector<std::string> SyntheticVocabularyTokens(int vocab_size);

}  // namespace copyctl

#endif  // COPYCTL_STEP_MODEL_HPP_
