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

#include <algorithm>
#include <numeric>

#include "copyctl/random.hpp"
#include "copyctl/step_model.hpp"

namespace copyctl {

namespace {

constexpr TokenId kFirstRegular = 3;

// EOS mass of p_gen: zero up to 0.8 x doc length, then linear up to 1 at
// the full doc length.
double EosRamp(std::size_t prefix_length, std::size_t doc_length) {
  const double start = 0.8 * static_cast<double>(doc_length);
  const double width = 0.2 * static_cast<double>(doc_length);
  const double x = static_cast<double>(prefix_length) - start;
  if (x <= 0.0) return 0.0;
  return std::min(1.0, x / std::max(width, 1.0));
}

}  // namespace

std::vector<std::string> SyntheticVocabularyTokens(int vocab_size) {
  std::vector<std::string> tokens;
  tokens.reserve(vocab_size);
  for (int i = 0; i < vocab_size; ++i) tokens.push_back("w" + std::to_string(i));
  return tokens;
}

SyntheticCopyModel::SyntheticCopyModel(SyntheticParams params)
    : params_(params), vocab_(SyntheticVocabularyTokens(params.vocab_size)) {
  if (params_.vocab_size < 1) throw InvalidConfig("synthetic vocab_size must be >= 1");
  if (!(params_.p_switch >= 0.0 && params_.p_switch <= 1.0)) {
    throw InvalidConfig("p_switch must lie in [0, 1]");
  }
  if (!(params_.m_copy >= 0.0 && params_.m_copy < params_.m_gen &&
        params_.m_gen <= 1.0)) {
    throw InvalidConfig("need 0 <= m_copy < m_gen <= 1");
  }
  if (!(params_.attn_peak > 0.0 && params_.attn_peak <= 1.0)) {
    throw InvalidConfig("attn_peak must lie in (0, 1]");
  }

  const std::size_t n = vocab_.size();
  const std::size_t regular = n - kFirstRegular;
  uniform_.assign(n, 0.0);
  for (std::size_t w = kFirstRegular; w < n; ++w) uniform_[w] = 1.0 / regular;

  // Zipf weights over a seed-derived permutation of the regular tokens.
  std::vector<std::size_t> order(regular);
  std::iota(order.begin(), order.end(), kFirstRegular);
  SplitMix64 rng(Mix64(params_.seed ^ 0x756E696772616DULL));
  for (std::size_t i = regular; i > 1; --i) {
    std::swap(order[i - 1], order[rng.Below(i)]);
  }
  unigram_.assign(n, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < regular; ++r) {
    unigram_[order[r]] = 1.0 / static_cast<double>(r + 1);
    total += unigram_[order[r]];
  }
  for (double& p : unigram_) p /= total;
}

StepOutput SyntheticCopyModel::Step(const SourceDocument& doc,
                                    std::span<const TokenId> prefix) const {
  const std::size_t length = doc.length();
  const std::size_t steps = prefix.size();
  const std::uint64_t doc_key = Mix64(params_.seed ^ Fnv1a64(doc.doc_id));

  // Replay branch decisions of earlier steps to recover the copy cursor.
  std::size_t cursor = 0;
  bool generate = false;
  std::size_t position = 0;
  for (std::size_t s = 1; s <= steps; ++s) {
    const auto last = static_cast<std::uint64_t>(prefix[s - 1]);
    SplitMix64 rng(Mix64(doc_key ^ Mix64(s ^ Mix64(last + 0x100000000ULL))));
    generate = rng.Uniform() < params_.p_switch;
    const std::size_t relocated = rng.Below(length);
    if (generate) {
      cursor = relocated;
    } else {
      position = cursor;
      cursor = (cursor + 1) % length;
    }
  }

  StepOutput out;
  const std::vector<double>& base = generate ? unigram_ : uniform_;
  const double eos = EosRamp(steps, length);
  out.p_gen.resize(base.size());
  for (std::size_t w = 0; w < base.size(); ++w) out.p_gen[w] = (1.0 - eos) * base[w];
  out.p_gen[kEos] += eos;

  if (generate) {
    out.m = params_.m_gen;
    out.alpha.assign(length, 1.0 / static_cast<double>(length));
  } else {
    out.m = params_.m_copy;
    out.alpha.assign(length,
                     (1.0 - params_.attn_peak) / static_cast<double>(length));
    out.alpha[position] += params_.attn_peak;
  }
  return out;
}

}  // namespace copyctl
