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

#ifndef COPYCTL_METRICS_HPP_
#define COPYCTL_METRICS_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace copyctl {

struct OverlapCount {
  std::size_t matches = 0;
  std::size_t total = 0;

  // 100 * matches / total, 0 when the summary has no n-grams.
  double percent() const;
};

// Summary n-gram occurrences (with multiplicity) that are members of the
// article's n-gram set.
OverlapCount NgramOverlapCount(const std::vector<std::string>& article,
                               const std::vector<std::string>& summary, int n);
double NgramOverlap(const std::vector<std::string>& article,
                    const std::vector<std::string>& summary, int n);

struct OverlapProfile {
  std::map<int, double> per_n;
  int summary_len = 0;
};

OverlapProfile ComputeOverlapProfile(const std::vector<std::string>& article,
                                     const std::vector<std::string>& summary,
                                     int n_min = 2, int n_max = 25);

struct PrfScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

// Harmonic mean, 0 when both inputs are 0.
double F1(double recall, double precision);

// Clipped n-gram co-occurrence. Tokens are compared lowercased.
PrfScore RougeN(const std::vector<std::string>& reference,
                const std::vector<std::string>& candidate, int n);

// Longest common subsequence variant.
PrfScore RougeL(const std::vector<std::string>& reference,
                const std::vector<std::string>& candidate);

std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b);

struct RougeScores {
  PrfScore rouge1;
  PrfScore rouge2;
  PrfScore rougeL;
};

RougeScores ComputeRouge(const std::vector<std::string>& reference,
                         const std::vector<std::string>& candidate);

inline constexpr int kHistogramBins = 20;

struct MixtureStats {
  double mean_m_bar = 0.0;
  std::array<int, kHistogramBins> histogram{};
  double mean_length = 0.0;
};

struct DecodeResult;

// Macro averages over documents. Throws EmptyCorpus.
MixtureStats ComputeMixtureStats(const std::vector<DecodeResult>& results);

// Rounds half-up to two decimals; used only when serializing percentages.
double RoundPercent(double value);

}  // namespace copyctl

#endif  // COPYCTL_METRICS_HPP_
