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

#include "copyctl/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "copyctl/beam.hpp"
#include "copyctl/errors.hpp"

namespace copyctl {

namespace {

// Interns tokens so n-grams can be hashed as id windows.
class Interner {
 public:
  std::vector<std::uint32_t> Map(const std::vector<std::string>& tokens,
                                 bool lowercase = false) {
    std::vector<std::uint32_t> ids;
    ids.reserve(tokens.size());
    for (const auto& token : tokens) {
      std::string key = token;
      if (lowercase) {
        for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
      auto [it, inserted] = ids_.emplace(std::move(key), static_cast<std::uint32_t>(ids_.size()));
      ids.push_back(it->second);
    }
    return ids;
  }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
};

using Gram = std::vector<std::uint32_t>;

struct GramHash {
  std::size_t operator()(const Gram& gram) const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::uint32_t id : gram) {
      h ^= id;
      h *= 0x100000001B3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

Gram Window(const std::vector<std::uint32_t>& ids, std::size_t start,
            std::size_t n) {
  return Gram(ids.begin() + start, ids.begin() + start + n);
}

std::unordered_map<Gram, std::size_t, GramHash> CountGrams(
    const std::vector<std::uint32_t>& ids, std::size_t n) {
  std::unordered_map<Gram, std::size_t, GramHash> counts;
  for (std::size_t i = 0; i + n <= ids.size(); ++i) ++counts[Window(ids, i, n)];
  return counts;
}

PrfScore MakePrf(double hits, double ref_total, double cand_total) {
  PrfScore s;
  s.recall = ref_total > 0 ? hits / ref_total : 0.0;
  s.precision = cand_total > 0 ? hits / cand_total : 0.0;
  s.f1 = F1(s.recall, s.precision);
  return s;
}

}  // namespace

double OverlapCount::percent() const {
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(matches) / static_cast<double>(total);
}

OverlapCount NgramOverlapCount(const std::vector<std::string>& article,
                               const std::vector<std::string>& summary, int n) {
  if (n < 1) throw InvalidConfig("n must be >= 1");
  const auto width = static_cast<std::size_t>(n);
  OverlapCount count;
  if (summary.size() < width) return count;
  Interner interner;
  const auto article_ids = interner.Map(article);
  const auto summary_ids = interner.Map(summary);
  std::unordered_set<Gram, GramHash> grams;
  for (std::size_t i = 0; i + width <= article_ids.size(); ++i) {
    grams.insert(Window(article_ids, i, width));
  }
  count.total = summary_ids.size() - width + 1;
  for (std::size_t i = 0; i < count.total; ++i) {
    if (grams.count(Window(summary_ids, i, width))) ++count.matches;
  }
  return count;
}

double NgramOverlap(const std::vector<std::string>& article,
                    const std::vector<std::string>& summary, int n) {
  return NgramOverlapCount(article, summary, n).percent();
}

OverlapProfile ComputeOverlapProfile(const std::vector<std::string>& article,
                                     const std::vector<std::string>& summary,
                                     int n_min, int n_max) {
  if (n_min < 1 || n_min > n_max) throw InvalidConfig("invalid n range");
  OverlapProfile profile;
  profile.summary_len = static_cast<int>(summary.size());
  for (int n = n_min; n <= n_max; ++n) {
    profile.per_n[n] = NgramOverlap(article, summary, n);
  }
  return profile;
}

double F1(double recall, double precision) {
  if (recall + precision == 0.0) return 0.0;
  return 2.0 * recall * precision / (recall + precision);
}

PrfScore RougeN(const std::vector<std::string>& reference,
                const std::vector<std::string>& candidate, int n) {
  if (n < 1) throw InvalidConfig("n must be >= 1");
  const auto width = static_cast<std::size_t>(n);
  Interner interner;
  const auto ref = CountGrams(interner.Map(reference, true), width);
  const auto cand = CountGrams(interner.Map(candidate, true), width);
  std::size_t hits = 0;
  for (const auto& [gram, count] : cand) {
    if (auto it = ref.find(gram); it != ref.end()) hits += std::min(count, it->second);
  }
  const double ref_total =
      reference.size() >= width ? static_cast<double>(reference.size() - width + 1) : 0.0;
  const double cand_total =
      candidate.size() >= width ? static_cast<double>(candidate.size() - width + 1) : 0.0;
  return MakePrf(static_cast<double>(hits), ref_total, cand_total);
}

std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  Interner interner;
  const auto x = interner.Map(a, true);
  const auto y = interner.Map(b, true);
  std::vector<std::size_t> prev(y.size() + 1, 0), row(y.size() + 1, 0);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    for (std::size_t j = 1; j <= y.size(); ++j) {
      row[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], row[j - 1]);
    }
    std::swap(prev, row);
  }
  return prev[y.size()];
}

PrfScore RougeL(const std::vector<std::string>& reference,
                const std::vector<std::string>& candidate) {
  const double lcs = static_cast<double>(LcsLength(reference, candidate));
  return MakePrf(lcs, static_cast<double>(reference.size()),
                 static_cast<double>(candidate.size()));
}

RougeScores ComputeRouge(const std::vector<std::string>& reference,
                         const std::vector<std::string>& candidate) {
  return {RougeN(reference, candidate, 1), RougeN(reference, candidate, 2),
          RougeL(reference, candidate)};
}

MixtureStats ComputeMixtureStats(const std::vector<DecodeResult>& results) {
  if (results.empty()) throw EmptyCorpus("mixture statistics need at least one result");
  MixtureStats stats;
  double m_sum = 0.0;
  double len_sum = 0.0;
  for (const auto& r : results) {
    m_sum += r.m_bar;
    len_sum += r.length;
    const int bin = std::clamp(static_cast<int>(std::floor(r.m_bar * kHistogramBins)),
                               0, kHistogramBins - 1);
    ++stats.histogram[bin];
  }
  stats.mean_m_bar = m_sum / static_cast<double>(results.size());
  stats.mean_length = len_sum / static_cast<double>(results.size());
  return stats;
}

// The nudge absorbs binary representation error so 12.345 rounds up.
double RoundPercent(double value) {
  return std::floor(value * 100.0 + 0.5 + 1e-9) / 100.0;
}

}  // namespace copyctl
