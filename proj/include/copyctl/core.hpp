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

#ifndef COPYCTL_CORE_HPP_
#define COPYCTL_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "copyctl/errors.hpp"

namespace copyctl {

// Ids below the vocabulary size index the generation vocabulary; ids at or
// above it name the current document's out-of-vocabulary source tokens.
using TokenId = std::int32_t;

inline constexpr TokenId kBos = 0;
inline constexpr TokenId kEos = 1;
inline constexpr TokenId kUnk = 2;

inline constexpr std::string_view kBosToken = "<s>";
inline constexpr std::string_view kEosToken = "</s>";
inline constexpr std::string_view kUnkToken = "<unk>";

// log(0) stand-in so hypothesis arithmetic stays finite.
inline constexpr double kLogZero = -1e9;

// Tolerance on the unit mass of model-provided distributions.
inline constexpr double kModelMassTolerance = 1e-6;

double SafeLog(double p);

class Vocabulary {
 public:
  // Reserved tokens occupy ids 0..2; `tokens` follow in order. Reserved
  // strings inside `tokens` are skipped, any other duplicate is rejected.
  explicit Vocabulary(const std::vector<std::string>& tokens = {});

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(TokenId id) const;
  // kUnk when absent.
  TokenId id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

struct SourceDocument {
  std::string doc_id;
  std::vector<std::string> surface_tokens;
  std::vector<TokenId> gen_ids;
  std::vector<TokenId> extended_ids;
  // oov_tokens[k] carries extended id vocab_size + k.
  std::vector<std::string> oov_tokens;
  std::size_t vocab_size = 0;

  std::size_t length() const { return surface_tokens.size(); }
  std::size_t extended_size() const { return vocab_size + oov_tokens.size(); }
  // Surface string of any extended id valid for this document.
  std::string token_string(const Vocabulary& vocab, TokenId id) const;
  // Extended id of a surface token: vocabulary id, this document's OOV id,
  // or kUnk.
  TokenId extended_id(const Vocabulary& vocab, std::string_view token) const;
};

SourceDocument ExtendVocabulary(const Vocabulary& vocab,
                                std::vector<std::string> surface_tokens,
                                std::string doc_id = {});

// One decoder step. p_gen is dense over the generation vocabulary, alpha over
// source positions. The decoded prefix doubles as the successor state.
struct StepOutput {
  std::vector<double> p_gen;
  std::vector<double> alpha;
  double m = 0.0;

  bool operator==(const StepOutput&) const = default;
};

// Throws ValidationError describing the first violated invariant.
void ValidateStepOutput(const StepOutput& step, std::size_t vocab_size,
                        std::size_t source_length,
                        double tolerance = kModelMassTolerance);

struct ExtendedDistribution {
  std::vector<double> probs;

  double total() const;
};

// p(w) = m * p_gen(w) + (1 - m) * sum of alpha over positions holding w.
ExtendedDistribution MixDistributions(const StepOutput& step,
                                      const SourceDocument& doc);

// Penalty strength schedule: t * eta0, t >= 1.
double EtaAt(int t, double eta0);

double CopyPenalty(double m_bar, double m_star, double eta_t);

struct MixtureTracker {
  int count = 0;
  double sum = 0.0;
  double mean = 0.0;
  std::vector<double> history;
};

MixtureTracker UpdateTracker(const MixtureTracker& tracker, double m);

enum class ScoringMode { kStandard, kCopyControlled };
enum class PenaltyPlacement { kPerStep, kTerminal };
enum class Ranking { kSumLogprob, kMeanLogprob };

struct ScorerConfig {
  ScoringMode mode = ScoringMode::kStandard;
  double m_star = 0.4;
  double eta0 = 0.5;
  PenaltyPlacement placement = PenaltyPlacement::kPerStep;
  Ranking ranking = Ranking::kSumLogprob;
};

// Score contribution of one emitted token; `tracker_after` already includes
// the step's mixture coefficient and t == tracker_after.count.
double ScoreIncrement(double logp, const MixtureTracker& tracker_after, int t,
                      const ScorerConfig& cfg);

// Ranking score of a finished hypothesis from its accumulated score. Applies
// the terminal penalty when configured, then the ranking normalization.
double FinalizeScore(double accumulated, const MixtureTracker& tracker,
                     int length, const ScorerConfig& cfg);

std::string_view ToString(ScoringMode mode);
std::string_view ToString(PenaltyPlacement placement);
std::string_view ToString(Ranking ranking);
ScoringMode ParseScoringMode(std::string_view text);
PenaltyPlacement ParsePenaltyPlacement(std::string_view text);
Ranking ParseRanking(std::string_view text);

}  // namespace copyctl

#endif  // COPYCTL_CORE_HPP_
