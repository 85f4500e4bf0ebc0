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

#ifndef COPYCTL_BEAM_HPP_
#define COPYCTL_BEAM_HPP_

#include <string>
#include <vector>

#include "copyctl/core.hpp"
#include "copyctl/step_model.hpp"

namespace copyctl {

struct Hypothesis {
  std::vector<TokenId> tokens{kBos};
  double cum_logp = 0.0;
  double cum_score = 0.0;
  MixtureTracker tracker;
  bool finished = false;
  int parent_rank = 0;
  // FinalizeScore of a finished hypothesis.
  double final_score = 0.0;

  // Emitted tokens, EOS included, BOS excluded.
  int length() const { return static_cast<int>(tokens.size()) - 1; }
};

struct DecodeConfig {
  int beam_size = 4;
  int min_len = 1;
  // Content tokens; a hypothesis still live after max_len steps is
  // force-finished by appending EOS at step max_len + 1.
  int max_len = 100;
  int n_best = 1;
  ScorerConfig scorer;

  // Throws InvalidConfig.
  void Validate() const;
};

// Frontier beam search. Returns up to n_best finished hypotheses ordered by
// final score (descending), then length (ascending), then token sequence.
// Throws ModelOutputError when the model breaks the step contract.
std::vector<Hypothesis> BeamSearch(const StepModel& model,
                                   const SourceDocument& doc,
                                   const DecodeConfig& cfg);

// Report-ready view of the best hypothesis.
struct DecodeResult {
  std::vector<TokenId> ids;         // summary ids, BOS and EOS excluded
  std::vector<std::string> tokens;  // surface strings of ids
  std::vector<double> m;            // one per emitted token, EOS step included
  double m_bar = 0.0;
  double cum_logp = 0.0;
  double score = 0.0;
  int length = 0;  // == tokens.size()
};

DecodeResult DecodeRecord(const StepModel& model, const SourceDocument& doc,
                          const DecodeConfig& cfg);

}  // namespace copyctl

#endif  // COPYCTL_BEAM_HPP_
