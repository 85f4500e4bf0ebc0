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

#include <algorithm>
#include <cstddef>

namespace copyctl {

void DecodeConfig::Validate() const {
  if (beam_size < 1) throw InvalidConfig("beam size must be >= 1");
  if (min_len < 1) throw InvalidConfig("min_len must be >= 1");
  if (min_len > max_len) throw InvalidConfig("min_len must not exceed max_len");
  if (n_best < 1 || n_best > beam_size) {
    throw InvalidConfig("n_best must lie in [1, beam size]");
  }
  if (!(scorer.m_star >= 0.0 && scorer.m_star <= 1.0)) {
    throw InvalidConfig("m_star must lie in [0, 1]");
  }
  if (!(scorer.eta0 >= 0.0)) throw InvalidConfig("eta0 must be >= 0");
}

namespace {

struct Candidate {
  int parent;
  TokenId token;
  double logp;
  double score;      // incremental
  double cum_score;  // parent cum_score + score
};

bool BetterFinished(const Hypothesis& a, const Hypothesis& b) {
  if (a.final_score != b.final_score) return a.final_score > b.final_score;
  if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
  return a.tokens < b.tokens;
}

Hypothesis Extend(const Hypothesis& parent, const Candidate& c,
                  const MixtureTracker& tracker_after) {
  Hypothesis h;
  h.tokens.reserve(parent.tokens.size() + 1);
  h.tokens = parent.tokens;
  h.tokens.push_back(c.token);
  h.cum_logp = parent.cum_logp + c.logp;
  h.cum_score = c.cum_score;
  h.tracker = tracker_after;
  h.parent_rank = c.parent;
  return h;
}

void Finish(Hypothesis& h, const ScorerConfig& scorer) {
  h.finished = true;
  h.final_score = FinalizeScore(h.cum_score, h.tracker, h.length(), scorer);
}

}  // namespace

std::vector<Hypothesis> BeamSearch(const StepModel& model,
                                   const SourceDocument& doc,
                                   const DecodeConfig& cfg) {
  cfg.Validate();
  const auto beam = static_cast<std::size_t>(cfg.beam_size);
  const std::size_t vocab = doc.extended_size();
  const bool full_expansion = beam >= vocab;
  const bool can_stop_early = cfg.scorer.ranking == Ranking::kSumLogprob;

  std::vector<Hypothesis> live(1);
  live.front().tokens = model.Init(doc);
  std::vector<Hypothesis> finished;

  auto by_candidate_order = [](const Candidate& a, const Candidate& b) {
    if (a.cum_score != b.cum_score) return a.cum_score > b.cum_score;
    if (a.token != b.token) return a.token < b.token;
    return a.parent < b.parent;
  };

  bool stopped = false;
  for (int t = 1; t <= cfg.max_len && !live.empty(); ++t) {
    std::vector<Candidate> candidates;
    std::vector<MixtureTracker> trackers;
    trackers.reserve(live.size());
    for (std::size_t rank = 0; rank < live.size(); ++rank) {
      const Hypothesis& hyp = live[rank];
      const StepOutput step = CheckedStep(model, doc, hyp.tokens);
      const ExtendedDistribution dist = MixDistributions(step, doc);
      trackers.push_back(UpdateTracker(hyp.tracker, step.m));
      const MixtureTracker& after = trackers.back();

      std::vector<Candidate> local;
      for (std::size_t w = 0; w < vocab; ++w) {
        const double p = dist.probs[w];
        if (w == static_cast<std::size_t>(kBos) || !(p > 0.0)) continue;
        if (w == static_cast<std::size_t>(kEos) && t < cfg.min_len) continue;
        const double logp = SafeLog(p);
        const double inc = ScoreIncrement(logp, after, t, cfg.scorer);
        local.push_back({static_cast<int>(rank), static_cast<TokenId>(w), logp,
                         inc, hyp.cum_score + inc});
      }
      if (!full_expansion && local.size() > 2 * beam) {
        std::partial_sort(local.begin(), local.begin() + 2 * beam, local.end(),
                          by_candidate_order);
        local.resize(2 * beam);
      }
      candidates.insert(candidates.end(), local.begin(), local.end());
    }

    std::sort(candidates.begin(), candidates.end(), by_candidate_order);
    std::vector<Hypothesis> next;
    for (const Candidate& c : candidates) {
      if (c.token == kEos) {
        Hypothesis h = Extend(live[c.parent], c, trackers[c.parent]);
        Finish(h, cfg.scorer);
        finished.push_back(std::move(h));
      } else if (next.size() < beam) {
        next.push_back(Extend(live[c.parent], c, trackers[c.parent]));
      }
    }
    live = std::move(next);

    if (can_stop_early && finished.size() >= beam && !live.empty()) {
      std::nth_element(finished.begin(), finished.begin() + (beam - 1),
                       finished.end(), BetterFinished);
      const double kth = finished[beam - 1].final_score;
      double bound = live.front().cum_score;
      for (const auto& h : live) bound = std::max(bound, h.cum_score);
      if (kth >= bound) {
        stopped = true;
        break;
      }
    }
  }

  if (!stopped) {
    // Force-finish survivors of the last step with the model's EOS mass.
    const int t = cfg.max_len + 1;
    for (Hypothesis& hyp : live) {
      const StepOutput step = CheckedStep(model, doc, hyp.tokens);
      const ExtendedDistribution dist = MixDistributions(step, doc);
      const MixtureTracker after = UpdateTracker(hyp.tracker, step.m);
      const double logp = SafeLog(dist.probs[kEos]);
      const double inc = ScoreIncrement(logp, after, t, cfg.scorer);
      Candidate c{hyp.parent_rank, kEos, logp, inc, hyp.cum_score + inc};
      Hypothesis h = Extend(hyp, c, after);
      Finish(h, cfg.scorer);
      finished.push_back(std::move(h));
    }
  }

  const std::size_t keep =
      std::min(finished.size(), static_cast<std::size_t>(cfg.n_best));
  std::partial_sort(finished.begin(), finished.begin() + keep, finished.end(),
                    BetterFinished);
  finished.resize(keep);
  return finished;
}

DecodeResult DecodeRecord(const StepModel& model, const SourceDocument& doc,
                          const DecodeConfig& cfg) {
  const std::vector<Hypothesis> ranked = BeamSearch(model, doc, cfg);
  if (ranked.empty()) {
    throw ModelOutputError("doc '" + doc.doc_id + "': no hypothesis finished",
                           0, "");
  }
  const Hypothesis& best = ranked.front();
  DecodeResult result;
  result.ids.assign(best.tokens.begin() + 1, best.tokens.end());
  if (!result.ids.empty() && result.ids.back() == kEos) result.ids.pop_back();
  for (TokenId id : result.ids) {
    result.tokens.push_back(doc.token_string(model.vocabulary(), id));
  }
  result.m = best.tracker.history;
  result.m_bar = best.tracker.mean;
  result.cum_logp = best.cum_logp;
  result.score = best.final_score;
  result.length = static_cast<int>(result.ids.size());
  return result;
}

}  // namespace copyctl
