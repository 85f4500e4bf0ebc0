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
#include <optional>

namespace copyctl {

namespace {

class Enumerator {
 public:
  Enumerator(const StepModel& model, const SourceDocument& doc,
             const DecodeConfig& cfg)
      : model_(model), doc_(doc), cfg_(cfg) {}

  void Visit(const Hypothesis& node) {
    const int depth = node.length();
    const StepOutput step = CheckedStep(model_, doc_, node.tokens);
    const ExtendedDistribution dist = MixDistributions(step, doc_);
    const MixtureTracker after = UpdateTracker(node.tracker, step.m);
    const int t = depth + 1;

    if (depth == cfg_.max_len) {
      Consider(Child(node, kEos, SafeLog(dist.probs[kEos]), after, t));
      return;
    }
    for (std::size_t w = 0; w < dist.probs.size(); ++w) {
      const auto token = static_cast<TokenId>(w);
      if (token == kBos || !(dist.probs[w] > 0.0)) continue;
      Hypothesis child = Child(node, token, SafeLog(dist.probs[w]), after, t);
      if (token == kEos) {
        if (t >= cfg_.min_len) Consider(std::move(child));
      } else {
        Visit(child);
      }
    }
  }

  std::optional<Hypothesis> best;

 private:
  Hypothesis Child(const Hypothesis& node, TokenId token, double logp,
                   const MixtureTracker& after, int t) const {
    Hypothesis child;
    child.tokens = node.tokens;
    child.tokens.push_back(token);
    child.cum_logp = node.cum_logp + logp;
    child.cum_score = node.cum_score + ScoreIncrement(logp, after, t, cfg_.scorer);
    child.tracker = after;
    return child;
  }

  void Consider(Hypothesis h) {
    h.finished = true;
    h.final_score = FinalizeScore(h.cum_score, h.tracker, h.length(), cfg_.scorer);
    if (!best || Prefer(h, *best)) best = std::move(h);
  }

  static bool Prefer(const Hypothesis& a, const Hypothesis& b) {
    if (a.final_score > b.final_score) return true;
    if (a.final_score < b.final_score) return false;
    if (a.tokens.size() < b.tokens.size()) return true;
    if (a.tokens.size() > b.tokens.size()) return false;
    return a.tokens < b.tokens;
  }

  const StepModel& model_;
  const SourceDocument& doc_;
  const DecodeConfig& cfg_;
};

}  // namespace

Hypothesis ExhaustiveDecode(const StepModel& model, const SourceDocument& doc,
                            const DecodeConfig& cfg) {
  if (cfg.min_len < 1 || cfg.min_len > cfg.max_len) {
    throw InvalidConfig("exhaustive decode needs 1 <= min_len <= max_len");
  }
  const double space = std::pow(static_cast<double>(doc.extended_size()),
                                static_cast<double>(cfg.max_len));
  if (space > kExhaustiveSpaceLimit) {
    throw SpaceTooLarge("search space " + std::to_string(doc.extended_size()) +
                        "^" + std::to_string(cfg.max_len) + " exceeds 1e6");
  }
  Enumerator enumerator(model, doc, cfg);
  Hypothesis root;
  root.tokens = model.Init(doc);
  enumerator.Visit(root);
  if (!enumerator.best) {
    throw ModelOutputError("doc '" + doc.doc_id + "': no sequence can finish",
                           0, "");
  }
  return *std::move(enumerator.best);
}

double NaiveOverlap(const std::vector<std::string>& article,
                    const std::vector<std::string>& summary, int n) {
  if (n < 1) throw InvalidConfig("n must be >= 1");
  const auto width = static_cast<std::size_t>(n);
  if (summary.size() < width) return 0.0;
  const std::size_t total = summary.size() - width + 1;
  std::size_t matches = 0;
  for (std::size_t s = 0; s < total; ++s) {
    bool found = false;
    for (std::size_t a = 0; !found && a + width <= article.size(); ++a) {
      std::size_t k = 0;
      while (k < width && article[a + k] == summary[s + k]) ++k;
      found = k == width;
    }
    if (found) ++matches;
  }
  return 100.0 * static_cast<double>(matches) / static_cast<double>(total);
}

}  // namespace copyctl
