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

#include "copyctl/runner.hpp"

#include <cmath>

#include "copyctl/errors.hpp"
#include "doctest.h"
#include "test_support.hpp"

namespace copyctl {
namespace {

std::vector<CorpusRecord> SmallCorpus(int n_docs) {
  SyntheticCorpusParams params;
  params.seed = 5;
  params.n_docs = n_docs;
  params.min_len = 20;
  params.max_len = 40;
  return GenerateSyntheticCorpus(params);
}

RunConfig SmallConfig() {
  RunConfig config;
  config.decode.max_len = 30;
  return config;
}

TEST_CASE("corpus report equals the mean of document metrics") {
  const auto corpus = SmallCorpus(12);
  const RunOutput out = RunDecode(corpus, SmallConfig());
  REQUIRE(out.documents.size() == corpus.size());
  double m_bar = 0.0, len = 0.0, r1 = 0.0;
  std::map<int, double> overlap;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& doc = out.documents[i];
    CHECK(doc.id == corpus[i].id);
    m_bar += doc.result.m_bar;
    len += doc.result.length;
    r1 += doc.rouge.rouge1.f1;
    for (const auto& [n, v] : doc.overlap.per_n) overlap[n] += v;
  }
  const double k = 1.0 / static_cast<double>(corpus.size());
  CHECK(std::abs(out.report.mixture.mean_m_bar - m_bar * k) <= 1e-9);
  CHECK(std::abs(out.report.mixture.mean_length - len * k) <= 1e-9);
  CHECK(std::abs(out.report.rouge.rouge1.f1 - r1 * k) <= 1e-9);
  for (const auto& [n, v] : overlap) {
    CHECK(std::abs(out.report.overlap.at(n) - v * k) <= 1e-9);
  }
  int histogram_total = 0;
  for (int c : out.report.mixture.histogram) histogram_total += c;
  CHECK(histogram_total == 12);
}

TEST_CASE("parallel decoding matches serial decoding") {
  const auto corpus = SmallCorpus(9);
  RunConfig serial = SmallConfig();
  RunConfig parallel = SmallConfig();
  parallel.jobs = 3;
  const RunOutput a = RunDecode(corpus, serial);
  const RunOutput b = RunDecode(corpus, parallel);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(DocumentJson(a.documents[i]) == DocumentJson(b.documents[i]));
  }
}

TEST_CASE("comparing a configuration with itself gives zero deltas") {
  const auto corpus = SmallCorpus(6);
  const RunConfig config = SmallConfig();
  const RunOutput a = RunDecode(corpus, config);
  const RunOutput b = RunDecode(corpus, config);
  const auto cmp = ComparisonJson(a, config, b, config);
  CHECK(cmp["identical_outputs"] == 6);
  CHECK(cmp["delta"]["mean_m_bar"] == 0.0);
  CHECK(cmp["delta"]["mean_len"] == 0.0);
  for (const auto& [n, v] : cmp["delta"]["overlap"].items()) CHECK(v == 0.0);
  for (const auto& [name, prf] : cmp["delta"]["rouge"].items()) {
    for (const auto& [field, v] : prf.items()) CHECK(v == 0.0);
  }
}

TEST_CASE("copy-controlled with eta0 zero reproduces standard decoding") {
  const auto corpus = SmallCorpus(6);
  RunConfig standard = SmallConfig();
  RunConfig controlled = SmallConfig();
  controlled.decode.scorer.mode = ScoringMode::kCopyControlled;
  controlled.decode.scorer.eta0 = 0.0;
  const RunOutput a = RunDecode(corpus, standard);
  const RunOutput b = RunDecode(corpus, controlled);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(a.documents[i].result.ids == b.documents[i].result.ids);
  }
}

TEST_CASE("config merging") {
  RunConfig base;
  const RunConfig merged = ApplyConfigJson(
      {{"mode", "copy_controlled"}, {"eta0", 1.0}, {"beam_size", 2}, {"p_switch", 0.3}},
      base);
  CHECK(merged.decode.scorer.mode == ScoringMode::kCopyControlled);
  CHECK(merged.decode.scorer.eta0 == 1.0);
  CHECK(merged.decode.beam_size == 2);
  CHECK(merged.synthetic->p_switch == 0.3);
  CHECK(merged.decode.scorer.m_star == 0.4);

  CHECK_THROWS_AS(ApplyConfigJson({{"bogus", 1}}, base), InvalidConfig);
  CHECK_THROWS_AS(ApplyConfigJson({{"mode", "greedy"}}, base), InvalidConfig);
  CHECK_THROWS_AS(ApplyConfigJson({{"beam_size", "four"}}, base), InvalidConfig);
  CHECK_THROWS_AS(ApplyConfigJson({{"scripted_model", "x.model"}, {"seed", 1}}, base),
                  InvalidConfig);
  const RunConfig scripted = ApplyConfigJson({{"scripted_model", "x.model"}}, base);
  CHECK(!scripted.synthetic.has_value());
  CHECK_THROWS_AS(ApplyConfigJson({{"seed", 3}}, scripted), InvalidConfig);

  RunConfig bad = base;
  bad.decode.beam_size = 0;
  CHECK_THROWS_AS(bad.Validate(), InvalidConfig);
  bad = base;
  bad.n_min = 5;
  bad.n_max = 4;
  CHECK_THROWS_AS(bad.Validate(), InvalidConfig);
}

TEST_CASE("audit of references against themselves") {
  const auto corpus = SmallCorpus(4);
  std::vector<SummaryRecord> summaries;
  for (const auto& r : corpus) summaries.push_back({r.id, r.reference});
  const auto audit = RunAudit(corpus, summaries, 2, 25);
  CHECK(audit["n_docs"] == 4);
  CHECK(audit["overlap"] == audit["reference_overlap"]);
  for (const auto& [name, prf] : audit["rouge"].items()) CHECK(prf["f1"] == 1.0);
}

TEST_CASE("audit reports unmatched ids") {
  const auto corpus = SmallCorpus(3);
  std::vector<SummaryRecord> summaries = {{corpus[0].id, {"a"}}, {"stray", {"b"}}};
  try {
    RunAudit(corpus, summaries, 2, 25);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    const std::string what = e.what();
    CHECK(what.find("stray") != std::string::npos);
    CHECK(what.find(corpus[1].id) != std::string::npos);
  }
}

TEST_CASE("model contract errors name the document") {
  const std::string path = testing::FixturePath("penalty_flip.model");
  RunConfig config;
  config = ApplyConfigJson({{"scripted_model", path}, {"max_len", 4}}, config);
  // The article has five tokens but the scripted alpha covers four.
  const std::vector<CorpusRecord> corpus = {{"flip", {"c1", "c2", "c3", "c4", "c5"}, {"g1"}}};
  try {
    RunDecode(corpus, config);
    FAIL("expected ModelOutputError");
  } catch (const ModelOutputError& e) {
    CHECK(std::string(e.what()).find("flip") != std::string::npos);
    CHECK(e.step() == 1);
  }
}

TEST_CASE("greedy synthetic decode lands in the frozen mixture band") {
  SyntheticCorpusParams corpus_params;
  corpus_params.seed = 42;
  const auto corpus = GenerateSyntheticCorpus(corpus_params);
  RunConfig config;
  config.synthetic->seed = 42;
  config.synthetic->p_switch = 0.15;
  config.decode.beam_size = 1;
  const double m_bar = RunDecode(corpus, config).report.mixture.mean_m_bar;
  CHECK(m_bar >= 0.05);
  CHECK(m_bar <= 0.3);
}

TEST_CASE("sig6 formatting") {
  CHECK(Sig6(1.0 / 3.0) == 0.333333);
  CHECK(Sig6(123456789.0) == 123457000.0);
  CHECK(Sig6(0.0) == 0.0);
  CHECK(Sig6(-2.5) == -2.5);
}

}  // namespace
}  // namespace copyctl
