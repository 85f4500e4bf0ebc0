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

#ifndef COPYCTL_CORPUS_HPP_
#define COPYCTL_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace copyctl {

// One line of a corpus file. Text is pre-tokenized: whitespace-separated,
// lowercase.
struct CorpusRecord {
  std::string id;
  std::vector<std::string> article;
  std::vector<std::string> reference;

  bool operator==(const CorpusRecord&) const = default;
};

struct SummaryRecord {
  std::string id;
  std::vector<std::string> summary;
};

std::vector<std::string> SplitTokens(const std::string& text);
std::string JoinTokens(const std::vector<std::string>& tokens);

// Line-delimited {id, article, reference}. Throws InputError on unreadable
// files, malformed lines, duplicate ids or empty articles.
std::vector<CorpusRecord> ReadCorpus(const std::filesystem::path& path);
std::vector<CorpusRecord> ReadCorpus(std::istream& in, const std::string& name);
void WriteCorpus(std::ostream& out, const std::vector<CorpusRecord>& records);

// Line-delimited {id, summary}.
std::vector<SummaryRecord> ReadSummaries(const std::filesystem::path& path);

struct SyntheticCorpusParams {
  std::uint64_t seed = 1;
  int n_docs = 200;
  int vocab_size = 50;
  int min_len = 40;
  int max_len = 120;
};

// Random-token articles (Zipf over w0.., with rare out-of-vocabulary x*
// tokens) and references built from two shuffled source spans plus fresh n*
// tokens. A fresh token is inserted between any two adjacent reference tokens
// that form an article bigram, so references share no n-gram (n >= 2) with
// their article. Deterministic per seed. Throws InvalidConfig.
std::vector<CorpusRecord> GenerateSyntheticCorpus(
    const SyntheticCorpusParams& params);

}  // namespace copyctl

#endif  // COPYCTL_CORPUS_HPP_
