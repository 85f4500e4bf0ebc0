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

#include "copyctl/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "copyctl/errors.hpp"
#include "copyctl/random.hpp"
#include "json.hpp"

namespace copyctl {

using nlohmann::json;

std::vector<std::string> SplitTokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

std::string JoinTokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& token : tokens) {
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

namespace {

template <typename Fn>
void ForEachJsonLine(std::istream& in, const std::string& name, Fn&& fn) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = name + ":" + std::to_string(line_no);
    try {
      fn(json::parse(line), where);
    } catch (const json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
  }
}

}  // namespace

std::vector<CorpusRecord> ReadCorpus(std::istream& in, const std::string& name) {
  std::vector<CorpusRecord> records;
  std::set<std::string> seen;
  ForEachJsonLine(in, name, [&](const json& row, const std::string& where) {
    CorpusRecord record;
    record.id = row.at("id").get<std::string>();
    record.article = SplitTokens(row.at("article").get<std::string>());
    record.reference = SplitTokens(row.value("reference", std::string()));
    if (record.article.empty()) {
      throw InputError(where + ": record '" + record.id + "' has an empty article");
    }
    if (!seen.insert(record.id).second) {
      throw InputError(where + ": duplicate id '" + record.id + "'");
    }
    records.push_back(std::move(record));
  });
  return records;
}

std::vector<CorpusRecord> ReadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read corpus " + path.string());
  return ReadCorpus(in, path.string());
}

void WriteCorpus(std::ostream& out, const std::vector<CorpusRecord>& records) {
  for (const auto& record : records) {
    json row = json::object();
    row["id"] = record.id;
    row["article"] = JoinTokens(record.article);
    row["reference"] = JoinTokens(record.reference);
    out << row.dump() << '\n';
  }
}

std::vector<SummaryRecord> ReadSummaries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read summaries " + path.string());
  std::vector<SummaryRecord> records;
  std::set<std::string> seen;
  ForEachJsonLine(in, path.string(), [&](const json& row, const std::string& where) {
    SummaryRecord record;
    record.id = row.at("id").get<std::string>();
    record.summary = SplitTokens(row.at("summary").get<std::string>());
    if (!seen.insert(record.id).second) {
      throw InputError(where + ": duplicate id '" + record.id + "'");
    }
    records.push_back(std::move(record));
  });
  return records;
}

std::vector<CorpusRecord> GenerateSyntheticCorpus(
    const SyntheticCorpusParams& params) {
  if (params.n_docs < 1) throw InvalidConfig("n_docs must be >= 1");
  if (params.vocab_size < 8) throw InvalidConfig("vocab_size must be >= 8");
  if (params.min_len < 5 || params.max_len > 400 ||
      params.min_len > params.max_len) {
    throw InvalidConfig("doc length range must lie within [5, 400]");
  }

  std::vector<double> cdf(params.vocab_size);
  double total = 0.0;
  for (int r = 0; r < params.vocab_size; ++r) {
    total += 1.0 / (r + 1);
    cdf[r] = total;
  }
  for (double& c : cdf) c /= total;

  SplitMix64 rng(Mix64(params.seed));
  auto fresh = [&rng] { return "n" + std::to_string(rng.Below(100000)); };

  std::vector<CorpusRecord> corpus;
  corpus.reserve(params.n_docs);
  for (int d = 0; d < params.n_docs; ++d) {
    CorpusRecord record;
    char id[32];
    std::snprintf(id, sizeof(id), "doc-%05d", d);
    record.id = id;

    const auto len = static_cast<std::size_t>(
        params.min_len + rng.Below(params.max_len - params.min_len + 1));
    for (std::size_t i = 0; i < len; ++i) {
      if (rng.Uniform() < 0.05) {
        record.article.push_back("x" + std::to_string(rng.Below(1000)));
        continue;
      }
      const double u = rng.Uniform();
      const auto rank = std::min<std::size_t>(
          std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(),
          cdf.size() - 1);
      record.article.push_back("w" + std::to_string(rank));
    }

    std::vector<std::string> pool;
    for (int span = 0; span < 2; ++span) {
      const std::size_t span_len = std::min<std::size_t>(3 + rng.Below(4), len);
      const std::size_t start = rng.Below(len - span_len + 1);
      pool.insert(pool.end(), record.article.begin() + start,
                  record.article.begin() + start + span_len);
    }
    for (std::size_t i = pool.size(); i > 1; --i) {
      std::swap(pool[i - 1], pool[rng.Below(i)]);
    }
    for (int k = 0; k < 2; ++k) {
      pool.insert(pool.begin() + rng.Below(pool.size() + 1), fresh());
    }

    std::set<std::pair<std::string, std::string>> bigrams;
    for (std::size_t i = 0; i + 1 < len; ++i) {
      bigrams.emplace(record.article[i], record.article[i + 1]);
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (i > 0 && bigrams.count({pool[i - 1], pool[i]})) {
        record.reference.push_back(fresh());
      }
      record.reference.push_back(pool[i]);
    }
    corpus.push_back(std::move(record));
  }
  return corpus;
}

}  // namespace copyctl
