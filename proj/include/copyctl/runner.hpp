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

#ifndef COPYCTL_RUNNER_HPP_
#define COPYCTL_RUNNER_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "copyctl/beam.hpp"
#include "copyctl/corpus.hpp"
#include "copyctl/metrics.hpp"
#include "copyctl/step_model.hpp"
#include "json.hpp"

namespace copyctl {

using ordered_json = nlohmann::ordered_json;

// One decode configuration: a model spec plus decoding and metric settings.
struct RunConfig {
  // Exactly one of the two is set.
  std::optional<std::filesystem::path> scripted_model;
  std::optional<SyntheticParams> synthetic = SyntheticParams{};

  DecodeConfig decode;
  int n_min = 2;
  int n_max = 25;
  // Worker threads; results are assembled in input order regardless.
  int jobs = 1;

  void Validate() const;
  // Config echo written into reports. Excludes `jobs`.
  ordered_json ToJson() const;
};

// Applies the keys present in `config` on top of `base`. Unknown keys are
// rejected with InvalidConfig.
RunConfig ApplyConfigJson(const nlohmann::json& config, RunConfig base);
RunConfig LoadConfigFile(const std::filesystem::path& path, RunConfig base);

std::unique_ptr<StepModel> MakeModel(const RunConfig& config);

struct DocumentReport {
  std::string id;
  DecodeResult result;
  OverlapProfile overlap;
  RougeScores rouge;
};

struct CorpusReport {
  int n_docs = 0;
  MixtureStats mixture;
  std::map<int, double> overlap;  // macro mean per n
  RougeScores rouge;              // macro means
};

struct RunOutput {
  std::vector<DocumentReport> documents;
  CorpusReport report;
};

// Decodes every record and aggregates metrics against article and reference.
// Throws ModelOutputError naming the failing document.
RunOutput RunDecode(const std::vector<CorpusRecord>& corpus,
                    const RunConfig& config);

CorpusReport Aggregate(const std::vector<DocumentReport>& documents);

// Serialization. Numbers carry 6 significant digits; percentages are
// additionally rounded half-up to 2 decimals.
ordered_json DocumentJson(const DocumentReport& doc);
ordered_json CorpusReportJson(const CorpusReport& report, const RunConfig& config);
ordered_json ComparisonJson(const RunOutput& a, const RunConfig& config_a,
                            const RunOutput& b, const RunConfig& config_b);

// Audit of externally produced summaries against articles and references.
// Throws InputError listing ids without a counterpart.
ordered_json RunAudit(const std::vector<CorpusRecord>& corpus,
                      const std::vector<SummaryRecord>& summaries, int n_min,
                      int n_max);

// Writes per-document lines to `results` and the corpus report to `report`.
void WriteRunOutput(const RunOutput& output, const RunConfig& config,
                    const std::filesystem::path& results,
                    const std::filesystem::path& report);
void WriteJson(const ordered_json& doc, const std::filesystem::path& path);

double Sig6(double value);

}  // namespace copyctl

#endif  // COPYCTL_RUNNER_HPP_
