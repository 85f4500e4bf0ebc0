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

#include "copyctl/oracle.hpp"

#include <cmath>

#include "doctest.h"
#include "test_support.hpp"

namespace copyctl {
namespace {

using testing::FixturePath;

TEST_CASE("exhaustive decode agrees with greedy on greedy_copy") {
  const ScriptedModel model = LoadScripted(FixturePath("greedy_copy.model"));
  const SourceDocument& doc = model.source("doc1");
  DecodeConfig cfg;
  cfg.beam_size = 1;
  cfg.max_len = 3;
  const Hypothesis best = ExhaustiveDecode(model, doc, cfg);
  const auto greedy = BeamSearch(model, doc, cfg);
  CHECK(best.tokens == greedy.front().tokens);
  CHECK(best.final_score == greedy.front().final_score);
}

TEST_CASE("exhaustive decode on penalty_flip") {
  const ScriptedModel model = LoadScripted(FixturePath("penalty_flip.model"));
  const SourceDocument& doc = model.source("flip");
  DecodeConfig cfg;
  cfg.max_len = 5;
  cfg.scorer.mode = ScoringMode::kCopyControlled;
  cfg.scorer.eta0 = 0.5;
  auto id = [&](const char* token) { return doc.extended_id(model.vocabulary(), token); };
  const Hypothesis gen = ExhaustiveDecode(model, doc, cfg);
  CHECK(gen.tokens == std::vector<TokenId>{kBos, id("g1"), id("g2"), kEos});
  CHECK(gen.final_score == doctest::Approx(-1.05).epsilon(1e-12));
  cfg.scorer.eta0 = 0.0;
  const Hypothesis copy = ExhaustiveDecode(model, doc, cfg);
  CHECK(copy.tokens == std::vector<TokenId>{kBos, id("c1"), id("c2"), id("c3"), id("c4"), kEos});
  CHECK(copy.final_score == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("exhaustive decode refuses oversized spaces") {
  const ScriptedModel model = ParseScripted(R"({
    "gen_vocab": ["a"], "sources": {"d": ["b", "c"]},
    "default": {"p_gen": {"a": 0.5, "</s>": 0.5}, "m": 0.5}})");
  const SourceDocument& doc = model.source("d");
  REQUIRE(doc.extended_size() == 6);
  DecodeConfig cfg;
  cfg.max_len = 8;
  CHECK_THROWS_AS(ExhaustiveDecode(model, doc, cfg), SpaceTooLarge);
  cfg.max_len = 7;
  CHECK_NOTHROW(ExhaustiveDecode(model, doc, cfg));
}

TEST_CASE("full-width beam equals exhaustive decode on random scripted models") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    testing::RandomModelShape spec;
    const ScriptedModel model = testing::RandomScriptedModel(seed, &spec);
    const SourceDocument& doc = model.source("rand");
    DecodeConfig cfg;
    cfg.beam_size = 7776;
    cfg.max_len = spec.max_len;
    cfg.min_len = spec.min_len;
    cfg.scorer.mode = seed % 2 ? ScoringMode::kCopyControlled : ScoringMode::kStandard;
    const Hypothesis oracle = ExhaustiveDecode(model, doc, cfg);
    const auto beam = BeamSearch(model, doc, cfg);
    REQUIRE(!beam.empty());
    CHECK(beam.front().tokens == oracle.tokens);
    CHECK(std::abs(beam.front().final_score - oracle.final_score) <= 1e-9);
  }
}

TEST_CASE("naive overlap examples") {
  const std::vector<std::string> text = {"a", "b", "c", "d", "e"};
  CHECK(NaiveOverlap(text, text, 3) == 100.0);
  CHECK(NaiveOverlap(text, {"x", "y", "z"}, 1) == 0.0);
  CHECK(NaiveOverlap(text, {"a", "b", "c", "x", "b", "c", "d"}, 2) ==
        doctest::Approx(400.0 / 6).epsilon(1e-15));
  CHECK(NaiveOverlap(text, {"a"}, 2) == 0.0);
}

}  // namespace
}  // namespace copyctl
