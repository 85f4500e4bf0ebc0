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

#include "copyctl/beam.hpp"

#include <cmath>

#include "copyctl/oracle.hpp"
#include "doctest.h"
#include "test_support.hpp"

namespace copyctl {
namespace {

using testing::FixturePath;
using testing::PenaltyFlipJson;

DecodeConfig FlipConfig(double eta0, PenaltyPlacement placement = PenaltyPlacement::kPerStep) {
  DecodeConfig cfg;
  cfg.beam_size = 4;
  cfg.max_len = 5;
  cfg.n_best = 4;
  cfg.scorer.mode = ScoringMode::kCopyControlled;
  cfg.scorer.m_star = 0.4;
  cfg.scorer.eta0 = eta0;
  cfg.scorer.placement = placement;
  return cfg;
}

std::vector<std::string> Surface(const ScriptedModel& model, const SourceDocument& doc,
                                 const Hypothesis& h) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < h.tokens.size(); ++i) {
    out.push_back(doc.token_string(model.vocabulary(), h.tokens[i]));
  }
  return out;
}

TEST_CASE("decode config validation") {
  DecodeConfig cfg;
  CHECK_NOTHROW(cfg.Validate());
  cfg.min_len = 10;
  cfg.max_len = 5;
  CHECK_THROWS_AS(cfg.Validate(), InvalidConfig);
  cfg = DecodeConfig{};
  cfg.n_best = 5;
  CHECK_THROWS_AS(cfg.Validate(), InvalidConfig);
  cfg = DecodeConfig{};
  cfg.beam_size = 0;
  CHECK_THROWS_AS(cfg.Validate(), InvalidConfig);
}

TEST_CASE("K = 1 on greedy_copy follows the argmax chain") {
  const ScriptedModel model = LoadScripted(FixturePath("greedy_copy.model"));
  const SourceDocument& doc = model.source("doc1");
  DecodeConfig cfg;
  cfg.beam_size = 1;
  cfg.max_len = 3;
  const auto ranked = BeamSearch(model, doc, cfg);
  REQUIRE(ranked.size() == 1);
  // Argmax of each mixed distribution, computed step by step.
  std::vector<TokenId> chain = {kBos};
  for (int t = 0; t < 3; ++t) {
    const auto dist = MixDistributions(model.Step(doc, chain), doc);
    TokenId best = 0;
    for (TokenId w = 1; w < static_cast<TokenId>(dist.probs.size()); ++w) {
      if (dist.probs[w] > dist.probs[best]) best = w;
    }
    chain.push_back(best);
  }
  chain.push_back(kEos);
  CHECK(ranked[0].tokens == chain);
  CHECK(Surface(model, doc, ranked[0]) ==
        std::vector<std::string>{"the", "cat", "sat", "</s>"});
  // m = 0 at every step leaves no EOS mass: the hypothesis is force-finished.
  CHECK(ranked[0].cum_logp == doctest::Approx(2 * std::log(0.7) + kLogZero));

  const DecodeResult result = DecodeRecord(model, doc, cfg);
  CHECK(result.m == std::vector<double>{0.0, 0.0, 0.0, 0.0});
  CHECK(result.m_bar == 0.0);
  CHECK(result.length == 3);
}

TEST_CASE("penalty_flip: hand-computed scores") {
  const ScriptedModel model = LoadScripted(FixturePath("penalty_flip.model"));
  const SourceDocument& doc = model.source("flip");

  // eta0 = 0.5, m* = 0.4, per-step placement.
  // copy path m = (0.4, 0, 0, 0.3, 1): penalties 0 + 0.2 + 0.4 + 0.45 + 0.15 = 1.2
  // gen path m = (0.4, 1, 1): running mean never drops below m*
  const auto ranked = BeamSearch(model, doc, FlipConfig(0.5));
  REQUIRE(ranked.size() >= 2);
  CHECK(Surface(model, doc, ranked[0]) == std::vector<std::string>{"g1", "g2", "</s>"});
  CHECK(ranked[0].cum_logp == doctest::Approx(-1.05).epsilon(1e-12));
  CHECK(ranked[0].final_score == doctest::Approx(-1.05).epsilon(1e-12));
  CHECK(Surface(model, doc, ranked[1]) ==
        std::vector<std::string>{"c1", "c2", "c3", "c4", "</s>"});
  CHECK(ranked[1].cum_logp == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ranked[1].final_score == doctest::Approx(-1.0 - 1.2).epsilon(1e-12));

  const auto plain = BeamSearch(model, doc, FlipConfig(0.0));
  CHECK(Surface(model, doc, plain[0]) ==
        std::vector<std::string>{"c1", "c2", "c3", "c4", "</s>"});
  CHECK(plain[0].final_score == doctest::Approx(-1.0).epsilon(1e-12));

  // Terminal placement: copy path pays eta_5 * (0.4 - 0.34) = 0.15 once.
  const auto terminal = BeamSearch(model, doc, FlipConfig(0.5, PenaltyPlacement::kTerminal));
  CHECK(Surface(model, doc, terminal[0]) == std::vector<std::string>{"g1", "g2", "</s>"});
  CHECK(terminal[0].final_score == doctest::Approx(-1.05).epsilon(1e-12));
  CHECK(terminal[1].final_score == doctest::Approx(-1.15).epsilon(1e-12));
}

TEST_CASE("decode_record on penalty_flip") {
  const ScriptedModel model = LoadScripted(FixturePath("penalty_flip.model"));
  const DecodeResult gen = DecodeRecord(model, model.source("flip"), FlipConfig(0.5));
  CHECK(gen.tokens == std::vector<std::string>{"g1", "g2"});
  CHECK(gen.m == std::vector<double>{0.4, 1.0, 1.0});
  CHECK(gen.m_bar == doctest::Approx(0.8).epsilon(1e-15));
  const DecodeResult copy = DecodeRecord(model, model.source("flip"), FlipConfig(0.0));
  CHECK(copy.m == std::vector<double>{0.4, 0.0, 0.0, 0.3, 1.0});
  CHECK(copy.m_bar == doctest::Approx(0.34).epsilon(1e-15));
}

TEST_CASE("hypothesis invariants hold for every returned hypothesis") {
  const SyntheticCopyModel model(SyntheticParams{});
  std::vector<std::string> tokens;
  for (int i = 0; i < 30; ++i) tokens.push_back("w" + std::to_string((i * 7) % 50));
  const SourceDocument doc = ExtendVocabulary(model.vocabulary(), tokens, "inv");
  for (auto mode : {ScoringMode::kStandard, ScoringMode::kCopyControlled}) {
    DecodeConfig cfg;
    cfg.beam_size = 4;
    cfg.n_best = 4;
    cfg.min_len = 5;
    cfg.max_len = 40;
    cfg.scorer.mode = mode;
    for (const Hypothesis& h : BeamSearch(model, doc, cfg)) {
      CHECK(h.tokens.front() == kBos);
      CHECK(h.tokens.back() == kEos);
      CHECK(h.finished);
      CHECK(h.tracker.count == static_cast<int>(h.tokens.size()) - 1);
      CHECK(h.length() >= cfg.min_len);
      if (mode == ScoringMode::kStandard) CHECK(h.cum_score == h.cum_logp);
    }
  }
}

TEST_CASE("min_len masks EOS") {
  const ScriptedModel model = ParseScripted(R"({
    "gen_vocab": ["a"], "sources": {"d": ["a"]},
    "default": {"p_gen": {"</s>": 0.9, "a": 0.1}, "m": 1.0}})");
  const SourceDocument& doc = model.source("d");
  DecodeConfig cfg;
  cfg.beam_size = 2;
  cfg.n_best = 2;
  cfg.min_len = 3;
  cfg.max_len = 6;
  const auto ranked = BeamSearch(model, doc, cfg);
  REQUIRE(!ranked.empty());
  for (const auto& h : ranked) CHECK(h.length() >= 3);
  CHECK(ranked[0].length() == 3);
  CHECK(ranked[0].cum_logp == doctest::Approx(2 * std::log(0.1) + std::log(0.9)));
}

TEST_CASE("live hypotheses are force-finished at max_len") {
  const ScriptedModel model = ParseScripted(R"({
    "gen_vocab": ["a"], "sources": {"d": ["a"]},
    "entries": [{"doc_id": "d", "prefix": ["<s>", "a", "a"],
                 "p_gen": {"</s>": 0.25, "a": 0.75}, "alpha": [1.0], "m": 1.0}],
    "default": {"p_gen": {"a": 1.0}, "m": 1.0}})");
  DecodeConfig cfg;
  cfg.beam_size = 1;
  cfg.max_len = 2;
  const auto ranked = BeamSearch(model, model.source("d"), cfg);
  REQUIRE(ranked.size() == 1);
  // EOS is appended with its actual probability at step max_len + 1.
  CHECK(ranked[0].tokens == std::vector<TokenId>{kBos, 3, 3, kEos});
  CHECK(ranked[0].cum_logp == doctest::Approx(std::log(0.25)).epsilon(1e-15));
  CHECK(ranked[0].tracker.count == 3);
}

TEST_CASE("model contract violations abort the decode") {
  class Broken final : public StepModel {
   public:
    const Vocabulary& vocabulary() const override { return vocab_; }
    StepOutput Step(const SourceDocument& doc, std::span<const TokenId> prefix) const override {
      StepOutput out{{0.0, 0.5, 0.0, 0.5}, std::vector<double>(doc.length(), 1.0 / doc.length()), 0.5};
      if (prefix.size() == 2) out.m = 1.7;
      return out;
    }

   private:
    Vocabulary vocab_{{"a"}};
  };
  const Broken model;
  const SourceDocument doc = ExtendVocabulary(model.vocabulary(), {"a", "b"}, "broken");
  DecodeConfig cfg;
  cfg.min_len = 3;
  cfg.max_len = 4;
  try {
    BeamSearch(model, doc, cfg);
    FAIL("expected ModelOutputError");
  } catch (const ModelOutputError& e) {
    CHECK(e.step() == 2);
    CHECK(std::string(e.what()).find("broken") != std::string::npos);
  }
}

TEST_CASE("copy-controlled decoding with eta0 = 0 matches standard decoding") {
  const SyntheticCopyModel model(SyntheticParams{});
  for (int d = 0; d < 5; ++d) {
    std::vector<std::string> tokens;
    for (int i = 0; i < 25 + d; ++i) tokens.push_back("w" + std::to_string((i * (d + 3)) % 50));
    const SourceDocument doc = ExtendVocabulary(model.vocabulary(), tokens, "doc" + std::to_string(d));
    DecodeConfig standard;
    standard.max_len = 40;
    DecodeConfig cc = standard;
    cc.scorer.mode = ScoringMode::kCopyControlled;
    cc.scorer.eta0 = 0.0;
    CHECK(DecodeRecord(model, doc, standard).ids == DecodeRecord(model, doc, cc).ids);
  }
}

TEST_CASE("penalty_flip family: selected m_bar is non-decreasing in eta0") {
  for (double gap : {0.01, 0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8, 1.2}) {
    const ScriptedModel model = ParseScripted(PenaltyFlipJson(gap));
    double previous = -1.0;
    for (double eta0 : {0.0, 0.25, 0.5, 1.0}) {
      const double m_bar = DecodeRecord(model, model.source("flip"), FlipConfig(eta0)).m_bar;
      CHECK(m_bar >= previous);
      previous = m_bar;
    }
  }
}

TEST_CASE("decoding is deterministic") {
  const SyntheticCopyModel model(SyntheticParams{});
  std::vector<std::string> tokens;
  for (int i = 0; i < 40; ++i) tokens.push_back("w" + std::to_string((i * 11) % 50));
  const SourceDocument doc = ExtendVocabulary(model.vocabulary(), tokens, "det");
  DecodeConfig cfg;
  cfg.n_best = 4;
  cfg.scorer.mode = ScoringMode::kCopyControlled;
  const auto a = BeamSearch(model, doc, cfg);
  const auto b = BeamSearch(model, doc, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].tokens == b[i].tokens);
    CHECK(a[i].final_score == b[i].final_score);
  }
}

TEST_CASE("mean_logprob ranking divides by length") {
  const ScriptedModel model = LoadScripted(FixturePath("penalty_flip.model"));
  DecodeConfig cfg = FlipConfig(0.0);
  cfg.scorer.ranking = Ranking::kMeanLogprob;
  const auto ranked = BeamSearch(model, model.source("flip"), cfg);
  CHECK(ranked[0].final_score == doctest::Approx(-1.0 / 5).epsilon(1e-12));
}

}  // namespace
}  // namespace copyctl
