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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <thread>

namespace copyctl {

using nlohmann::json;

namespace {

const std::set<std::string>& SyntheticKeys() {
  static const std::set<std::string> keys = {"seed",   "p_switch",  "m_copy",
                                             "m_gen",  "attn_peak", "vocab_size"};
  return keys;
}

template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1 || n < 2) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
  }
  for (auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

ordered_json Prf(const PrfScore& s) {
  return {{"recall", Sig6(s.recall)},
          {"precision", Sig6(s.precision)},
          {"f1", Sig6(s.f1)}};
}

ordered_json Rouge(const RougeScores& r) {
  return {{"r1", Prf(r.rouge1)}, {"r2", Prf(r.rouge2)}, {"rl", Prf(r.rougeL)}};
}

ordered_json Overlap(const std::map<int, double>& per_n) {
  ordered_json out = ordered_json::object();
  for (const auto& [n, value] : per_n) out[std::to_string(n)] = Sig6(RoundPercent(value));
  return out;
}

PrfScore Minus(const PrfScore& b, const PrfScore& a) {
  return {b.recall - a.recall, b.precision - a.precision, b.f1 - a.f1};
}

RougeScores Minus(const RougeScores& b, const RougeScores& a) {
  return {Minus(b.rouge1, a.rouge1), Minus(b.rouge2, a.rouge2),
          Minus(b.rougeL, a.rougeL)};
}

std::map<int, double> Minus(const std::map<int, double>& b,
                            const std::map<int, double>& a) {
  std::map<int, double> out;
  for (const auto& [n, value] : b) out[n] = value - a.at(n);
  return out;
}

void AddPrf(PrfScore& sum, const PrfScore& s) {
  sum.recall += s.recall;
  sum.precision += s.precision;
  sum.f1 += s.f1;
}

void ScalePrf(PrfScore& s, double k) {
  s.recall *= k;
  s.precision *= k;
  s.f1 *= k;
}

}  // namespace

double Sig6(double value) {
  if (value == 0.0 || !std::isfinite(value)) return value == 0.0 ? 0.0 : value;
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  const double rounded = std::strtod(buffer, nullptr);
  return rounded == 0.0 ? 0.0 : rounded;
}

void RunConfig::Validate() const {
  if (scripted_model.has_value() == synthetic.has_value()) {
    throw InvalidConfig("exactly one model (scripted or synthetic) is required");
  }
  decode.Validate();
  if (n_min < 1 || n_min > n_max) throw InvalidConfig("need 1 <= n_min <= n_max");
}

ordered_json RunConfig::ToJson() const {
  ordered_json model;
  if (scripted_model) {
    model = {{"type", "scripted"}, {"path", scripted_model->generic_string()}};
  } else {
    model = {{"type", "synthetic"},
             {"seed", synthetic->seed},
             {"p_switch", synthetic->p_switch},
             {"m_copy", synthetic->m_copy},
             {"m_gen", synthetic->m_gen},
             {"attn_peak", synthetic->attn_peak},
             {"vocab_size", synthetic->vocab_size}};
  }
  return {{"model", model},
          {"mode", ToString(decode.scorer.mode)},
          {"m_star", decode.scorer.m_star},
          {"eta0", decode.scorer.eta0},
          {"penalty_placement", ToString(decode.scorer.placement)},
          {"ranking", ToString(decode.scorer.ranking)},
          {"beam_size", decode.beam_size},
          {"min_len", decode.min_len},
          {"max_len", decode.max_len},
          {"n_min", n_min},
          {"n_max", n_max}};
}

RunConfig ApplyConfigJson(const json& config, RunConfig base) {
  if (!config.is_object()) throw InvalidConfig("config must be a JSON object");
  try {
    if (config.contains("scripted_model")) {
      for (const auto& key : SyntheticKeys()) {
        if (config.contains(key)) {
          throw InvalidConfig("'" + key + "' conflicts with scripted_model");
        }
      }
      base.scripted_model = config.at("scripted_model").get<std::string>();
      base.synthetic.reset();
    }
    for (const auto& [key, value] : config.items()) {
      if (key == "scripted_model") continue;
      if (SyntheticKeys().count(key)) {
        if (!base.synthetic) {
          throw InvalidConfig("'" + key + "' applies only to the synthetic model");
        }
        SyntheticParams& s = *base.synthetic;
        if (key == "seed") s.seed = value.get<std::uint64_t>();
        if (key == "p_switch") s.p_switch = value.get<double>();
        if (key == "m_copy") s.m_copy = value.get<double>();
        if (key == "m_gen") s.m_gen = value.get<double>();
        if (key == "attn_peak") s.attn_peak = value.get<double>();
        if (key == "vocab_size") s.vocab_size = value.get<int>();
      } else if (key == "mode") {
        base.decode.scorer.mode = ParseScoringMode(value.get<std::string>());
      } else if (key == "m_star") {
        base.decode.scorer.m_star = value.get<double>();
      } else if (key == "eta0") {
        base.decode.scorer.eta0 = value.get<double>();
      } else if (key == "penalty_placement") {
        base.decode.scorer.placement = ParsePenaltyPlacement(value.get<std::string>());
      } else if (key == "ranking") {
        base.decode.scorer.ranking = ParseRanking(value.get<std::string>());
      } else if (key == "beam_size") {
        base.decode.beam_size = value.get<int>();
      } else if (key == "min_len") {
        base.decode.min_len = value.get<int>();
      } else if (key == "max_len") {
        base.decode.max_len = value.get<int>();
      } else if (key == "n_best") {
        base.decode.n_best = value.get<int>();
      } else if (key == "n_min") {
        base.n_min = value.get<int>();
      } else if (key == "n_max") {
        base.n_max = value.get<int>();
      } else if (key == "jobs") {
        base.jobs = value.get<int>();
      } else {
        throw InvalidConfig("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("config: ") + e.what());
  }
  return base;
}

RunConfig LoadConfigFile(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config " + path.string());
  json config;
  try {
    config = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return ApplyConfigJson(config, std::move(base));
}

std::unique_ptr<StepModel> MakeModel(const RunConfig& config) {
  config.Validate();
  if (config.scripted_model) {
    return std::make_unique<ScriptedModel>(LoadScripted(*config.scripted_model));
  }
  return std::make_unique<SyntheticCopyModel>(*config.synthetic);
}

CorpusReport Aggregate(const std::vector<DocumentReport>& documents) {
  if (documents.empty()) throw EmptyCorpus("corpus has no documents");
  CorpusReport report;
  report.n_docs = static_cast<int>(documents.size());
  std::vector<DecodeResult> results;
  results.reserve(documents.size());
  for (const auto& doc : documents) {
    results.push_back(doc.result);
    for (const auto& [n, value] : doc.overlap.per_n) report.overlap[n] += value;
    AddPrf(report.rouge.rouge1, doc.rouge.rouge1);
    AddPrf(report.rouge.rouge2, doc.rouge.rouge2);
    AddPrf(report.rouge.rougeL, doc.rouge.rougeL);
  }
  report.mixture = ComputeMixtureStats(results);
  const double k = 1.0 / static_cast<double>(documents.size());
  for (auto& [n, value] : report.overlap) value *= k;
  ScalePrf(report.rouge.rouge1, k);
  ScalePrf(report.rouge.rouge2, k);
  ScalePrf(report.rouge.rougeL, k);
  return report;
}

RunOutput RunDecode(const std::vector<CorpusRecord>& corpus,
                    const RunConfig& config) {
  config.Validate();
  if (corpus.empty()) throw EmptyCorpus("corpus has no documents");
  const std::unique_ptr<StepModel> model = MakeModel(config);
  RunOutput output;
  output.documents.resize(corpus.size());
  ParallelFor(corpus.size(), config.jobs, [&](std::size_t i) {
    const CorpusRecord& record = corpus[i];
    const SourceDocument doc =
        ExtendVocabulary(model->vocabulary(), record.article, record.id);
    DocumentReport& report = output.documents[i];
    report.id = record.id;
    report.result = DecodeRecord(*model, doc, config.decode);
    report.overlap = ComputeOverlapProfile(record.article, report.result.tokens,
                                           config.n_min, config.n_max);
    report.rouge = ComputeRouge(record.reference, report.result.tokens);
  });
  output.report = Aggregate(output.documents);
  return output;
}

ordered_json DocumentJson(const DocumentReport& doc) {
  ordered_json m = ordered_json::array();
  for (double value : doc.result.m) m.push_back(Sig6(value));
  return {{"id", doc.id},
          {"tokens", doc.result.tokens},
          {"m", m},
          {"m_bar", Sig6(doc.result.m_bar)},
          {"cum_logp", Sig6(doc.result.cum_logp)},
          {"score", Sig6(doc.result.score)},
          {"length", doc.result.length},
          {"overlap", Overlap(doc.overlap.per_n)},
          {"rouge", Rouge(doc.rouge)}};
}

ordered_json CorpusReportJson(const CorpusReport& report,
                              const RunConfig& config) {
  return {{"config", config.ToJson()},
          {"n_docs", report.n_docs},
          {"mean_m_bar", Sig6(report.mixture.mean_m_bar)},
          {"mean_len", Sig6(report.mixture.mean_length)},
          {"m_bar_histogram", report.mixture.histogram},
          {"overlap", Overlap(report.overlap)},
          {"rouge", Rouge(report.rouge)}};
}

ordered_json ComparisonJson(const RunOutput& a, const RunConfig& config_a,
                            const RunOutput& b, const RunConfig& config_b) {
  if (a.documents.size() != b.documents.size()) {
    throw InputError("compared runs cover different documents");
  }
  ordered_json documents = ordered_json::array();
  int identical = 0;
  for (std::size_t i = 0; i < a.documents.size(); ++i) {
    const DocumentReport& da = a.documents[i];
    const DocumentReport& db = b.documents[i];
    if (da.id != db.id) throw InputError("compared runs disagree on document order");
    const bool same = da.result.ids == db.result.ids;
    identical += same ? 1 : 0;
    documents.push_back(
        {{"id", da.id},
         {"identical_tokens", same},
         {"m_bar_a", Sig6(da.result.m_bar)},
         {"m_bar_b", Sig6(db.result.m_bar)},
         {"delta_m_bar", Sig6(db.result.m_bar - da.result.m_bar)},
         {"delta_len", db.result.length - da.result.length},
         {"delta_overlap", Overlap(Minus(db.overlap.per_n, da.overlap.per_n))},
         {"delta_rouge", Rouge(Minus(db.rouge, da.rouge))}});
  }
  const CorpusReport& ra = a.report;
  const CorpusReport& rb = b.report;
  ordered_json delta = {
      {"mean_m_bar", Sig6(rb.mixture.mean_m_bar - ra.mixture.mean_m_bar)},
      {"mean_len", Sig6(rb.mixture.mean_length - ra.mixture.mean_length)},
      {"overlap", Overlap(Minus(rb.overlap, ra.overlap))},
      {"rouge", Rouge(Minus(rb.rouge, ra.rouge))}};
  return {{"n_docs", ra.n_docs},
          {"identical_outputs", identical},
          {"a", CorpusReportJson(ra, config_a)},
          {"b", CorpusReportJson(rb, config_b)},
          {"delta", delta},
          {"documents", documents}};
}

ordered_json RunAudit(const std::vector<CorpusRecord>& corpus,
                      const std::vector<SummaryRecord>& summaries, int n_min,
                      int n_max) {
  if (corpus.empty()) throw EmptyCorpus("corpus has no documents");
  std::map<std::string, const SummaryRecord*> by_id;
  for (const auto& s : summaries) by_id[s.id] = &s;
  std::set<std::string> unmatched;
  for (const auto& record : corpus) {
    if (!by_id.count(record.id)) unmatched.insert(record.id);
  }
  std::set<std::string> corpus_ids;
  for (const auto& record : corpus) corpus_ids.insert(record.id);
  for (const auto& s : summaries) {
    if (!corpus_ids.count(s.id)) unmatched.insert(s.id);
  }
  if (!unmatched.empty()) {
    std::string list;
    for (const auto& id : unmatched) list += (list.empty() ? "" : ", ") + id;
    throw InputError("ids without a counterpart: " + list);
  }

  ordered_json documents = ordered_json::array();
  std::map<int, double> summary_mean, reference_mean;
  RougeScores rouge_mean;
  double len_sum = 0.0;
  for (const auto& record : corpus) {
    const auto& summary = by_id.at(record.id)->summary;
    const OverlapProfile overlap =
        ComputeOverlapProfile(record.article, summary, n_min, n_max);
    const OverlapProfile reference =
        ComputeOverlapProfile(record.article, record.reference, n_min, n_max);
    const RougeScores rouge = ComputeRouge(record.reference, summary);
    for (const auto& [n, v] : overlap.per_n) summary_mean[n] += v;
    for (const auto& [n, v] : reference.per_n) reference_mean[n] += v;
    AddPrf(rouge_mean.rouge1, rouge.rouge1);
    AddPrf(rouge_mean.rouge2, rouge.rouge2);
    AddPrf(rouge_mean.rougeL, rouge.rougeL);
    len_sum += static_cast<double>(summary.size());
    documents.push_back({{"id", record.id},
                         {"length", summary.size()},
                         {"overlap", Overlap(overlap.per_n)},
                         {"reference_overlap", Overlap(reference.per_n)},
                         {"rouge", Rouge(rouge)}});
  }
  const double k = 1.0 / static_cast<double>(corpus.size());
  for (auto& [n, v] : summary_mean) v *= k;
  for (auto& [n, v] : reference_mean) v *= k;
  ScalePrf(rouge_mean.rouge1, k);
  ScalePrf(rouge_mean.rouge2, k);
  ScalePrf(rouge_mean.rougeL, k);
  return {{"n_docs", corpus.size()},
          {"n_min", n_min},
          {"n_max", n_max},
          {"mean_len", Sig6(len_sum * k)},
          {"overlap", Overlap(summary_mean)},
          {"reference_overlap", Overlap(reference_mean)},
          {"rouge", Rouge(rouge_mean)},
          {"documents", documents}};
}

void WriteJson(const ordered_json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

void WriteRunOutput(const RunOutput& output, const RunConfig& config,
                    const std::filesystem::path& results,
                    const std::filesystem::path& report) {
  std::ofstream lines(results, std::ios::binary);
  if (!lines) throw InputError("cannot write " + results.string());
  for (const auto& doc : output.documents) lines << DocumentJson(doc).dump() << '\n';
  WriteJson(CorpusReportJson(output.report, config), report);
}

}  // namespace copyctl
