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

#include "copyctl/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace copyctl {

double SafeLog(double p) { return p > 0.0 ? std::log(p) : kLogZero; }

Vocabulary::Vocabulary(const std::vector<std::string>& tokens) {
  tokens_.reserve(tokens.size() + 3);
  for (std::string_view reserved : {kBosToken, kEosToken, kUnkToken}) {
    index_.emplace(std::string(reserved), static_cast<TokenId>(tokens_.size()));
    tokens_.emplace_back(reserved);
  }
  for (const auto& token : tokens) {
    if (token == kBosToken || token == kEosToken || token == kUnkToken) continue;
    auto [it, inserted] =
        index_.emplace(token, static_cast<TokenId>(tokens_.size()));
    if (!inserted) throw ValidationError("duplicate vocabulary token '" + token + "'");
    tokens_.push_back(token);
  }
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw std::out_of_range("vocabulary id " + std::to_string(id));
  }
  return tokens_[id];
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

std::string SourceDocument::token_string(const Vocabulary& vocab,
                                         TokenId id) const {
  if (id >= 0 && static_cast<std::size_t>(id) < vocab_size) return vocab.token(id);
  const auto k = static_cast<std::size_t>(id) - vocab_size;
  if (id < 0 || k >= oov_tokens.size()) {
    throw std::out_of_range("extended id " + std::to_string(id));
  }
  return oov_tokens[k];
}

TokenId SourceDocument::extended_id(const Vocabulary& vocab,
                                    std::string_view token) const {
  if (vocab.contains(token)) return vocab.id(token);
  auto it = std::find(oov_tokens.begin(), oov_tokens.end(), token);
  if (it == oov_tokens.end()) return kUnk;
  return static_cast<TokenId>(vocab_size + (it - oov_tokens.begin()));
}

SourceDocument ExtendVocabulary(const Vocabulary& vocab,
                                std::vector<std::string> surface_tokens,
                                std::string doc_id) {
  if (surface_tokens.empty()) {
    throw InvalidSource("source document '" + doc_id + "' has no tokens");
  }
  SourceDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.vocab_size = vocab.size();
  doc.gen_ids.reserve(surface_tokens.size());
  doc.extended_ids.reserve(surface_tokens.size());
  std::unordered_map<std::string, TokenId> oov_ids;
  for (const auto& token : surface_tokens) {
    if (vocab.contains(token)) {
      const TokenId id = vocab.id(token);
      doc.gen_ids.push_back(id);
      doc.extended_ids.push_back(id);
      continue;
    }
    doc.gen_ids.push_back(kUnk);
    auto [it, inserted] = oov_ids.emplace(
        token, static_cast<TokenId>(vocab.size() + doc.oov_tokens.size()));
    if (inserted) doc.oov_tokens.push_back(token);
    doc.extended_ids.push_back(it->second);
  }
  doc.surface_tokens = std::move(surface_tokens);
  return doc;
}

namespace {

// Returns an empty string when `values` is a distribution within tolerance.
std::string CheckDistribution(std::span<const double> values, double tolerance) {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      return "entry " + std::to_string(i) + " is negative or not finite";
    }
    total += values[i];
  }
  if (std::abs(total - 1.0) > tolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "mass " << total << " is not within " << tolerance << " of 1";
    return os.str();
  }
  return {};
}

}  // namespace

void ValidateStepOutput(const StepOutput& step, std::size_t vocab_size,
                        std::size_t source_length, double tolerance) {
  if (step.p_gen.size() != vocab_size) {
    throw ValidationError("p_gen has " + std::to_string(step.p_gen.size()) +
                          " entries, vocabulary has " +
                          std::to_string(vocab_size));
  }
  if (step.alpha.size() != source_length) {
    throw ValidationError("alpha has " + std::to_string(step.alpha.size()) +
                          " entries, source has " +
                          std::to_string(source_length));
  }
  if (auto msg = CheckDistribution(step.p_gen, tolerance); !msg.empty()) {
    throw ValidationError("p_gen " + msg);
  }
  if (auto msg = CheckDistribution(step.alpha, tolerance); !msg.empty()) {
    throw ValidationError("alpha " + msg);
  }
  if (!(step.m >= 0.0 && step.m <= 1.0)) {
    throw ValidationError("mixture coefficient " + std::to_string(step.m) +
                          " outside [0, 1]");
  }
}

double ExtendedDistribution::total() const {
  double total = 0.0;
  for (double p : probs) total += p;
  return total;
}

ExtendedDistribution MixDistributions(const StepOutput& step,
                                      const SourceDocument& doc) {
  if (step.alpha.size() != doc.length()) {
    throw ShapeMismatch("alpha has " + std::to_string(step.alpha.size()) +
                        " entries, source has " + std::to_string(doc.length()));
  }
  if (step.p_gen.size() > doc.vocab_size) {
    throw ShapeMismatch("p_gen is wider than the document's vocabulary");
  }
  std::vector<double> copy(doc.extended_size(), 0.0);
  for (std::size_t i = 0; i < step.alpha.size(); ++i) {
    copy[doc.extended_ids[i]] += step.alpha[i];
  }
  ExtendedDistribution out;
  out.probs.resize(doc.extended_size());
  const double m = step.m;
  for (std::size_t w = 0; w < out.probs.size(); ++w) {
    const double gen = w < step.p_gen.size() ? step.p_gen[w] : 0.0;
    out.probs[w] = m * gen + (1.0 - m) * copy[w];
  }
  return out;
}

double EtaAt(int t, double eta0) {
  if (t < 1) throw InvalidStep("penalty schedule needs t >= 1, got " + std::to_string(t));
  return t * eta0;
}

double CopyPenalty(double m_bar, double m_star, double eta_t) {
  return eta_t * std::max(0.0, m_star - m_bar);
}

MixtureTracker UpdateTracker(const MixtureTracker& tracker, double m) {
  MixtureTracker next;
  next.count = tracker.count + 1;
  next.sum = tracker.sum + m;
  next.mean = next.sum / next.count;
  next.history.reserve(tracker.history.size() + 1);
  next.history = tracker.history;
  next.history.push_back(m);
  return next;
}

double ScoreIncrement(double logp, const MixtureTracker& tracker_after, int t,
                      const ScorerConfig& cfg) {
  if (cfg.mode == ScoringMode::kStandard ||
      cfg.placement == PenaltyPlacement::kTerminal) {
    return logp;
  }
  return logp - CopyPenalty(tracker_after.mean, cfg.m_star, EtaAt(t, cfg.eta0));
}

double FinalizeScore(double accumulated, const MixtureTracker& tracker,
                     int length, const ScorerConfig& cfg) {
  if (length < 1) throw EmptyHypothesis("cannot finalize an empty hypothesis");
  double base = accumulated;
  if (cfg.mode == ScoringMode::kCopyControlled &&
      cfg.placement == PenaltyPlacement::kTerminal) {
    base -= CopyPenalty(tracker.mean, cfg.m_star, EtaAt(length, cfg.eta0));
  }
  return cfg.ranking == Ranking::kMeanLogprob ? base / length : base;
}

std::string_view ToString(ScoringMode mode) {
  return mode == ScoringMode::kStandard ? "standard" : "copy_controlled";
}

std::string_view ToString(PenaltyPlacement placement) {
  return placement == PenaltyPlacement::kPerStep ? "per_step" : "terminal";
}

std::string_view ToString(Ranking ranking) {
  return ranking == Ranking::kSumLogprob ? "sum_logprob" : "mean_logprob";
}

ScoringMode ParseScoringMode(std::string_view text) {
  if (text == "standard") return ScoringMode::kStandard;
  if (text == "copy_controlled" || text == "copy-controlled") {
    return ScoringMode::kCopyControlled;
  }
  throw InvalidConfig("unknown scoring mode '" + std::string(text) + "'");
}

PenaltyPlacement ParsePenaltyPlacement(std::string_view text) {
  if (text == "per_step" || text == "per-step") return PenaltyPlacement::kPerStep;
  if (text == "terminal") return PenaltyPlacement::kTerminal;
  throw InvalidConfig("unknown penalty placement '" + std::string(text) + "'");
}

Ranking ParseRanking(std::string_view text) {
  if (text == "sum" || text == "sum_logprob") return Ranking::kSumLogprob;
  if (text == "mean" || text == "mean_logprob") return Ranking::kMeanLogprob;
  throw InvalidConfig("unknown ranking '" + std::string(text) + "'");
}

}  // namespace copyctl
