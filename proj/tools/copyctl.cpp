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

// Command-line front end: generate, decode, compare, audit.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "copyctl/corpus.hpp"
#include "copyctl/runner.hpp"

namespace fs = std::filesystem;
using copyctl::RunConfig;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitModel = 3;

// Flags mirror config-file keys; set flags are applied after config files.
struct DecodeFlags {
  std::optional<std::string> scripted_model;
  std::optional<std::string> mode;
  std::optional<int> beam_size;
  std::optional<double> m_star;
  std::optional<double> eta0;
  std::optional<std::string> penalty_placement;
  std::optional<std::string> ranking;
  std::optional<int> min_len;
  std::optional<int> max_len;
  std::optional<int> n_min;
  std::optional<int> n_max;
  std::optional<std::uint64_t> seed;
  std::optional<double> p_switch;
  std::optional<int> vocab_size;
  std::optional<int> jobs;

  void Register(CLI::App* app) {
    app->add_option("--scripted", scripted_model, "Scripted model file (replaces the synthetic model)");
    app->add_option("--mode", mode, "standard | copy-controlled");
    app->add_option("--beam-size", beam_size, "Beam width K");
    app->add_option("--m-star", m_star, "Target mixture coefficient");
    app->add_option("--eta0", eta0, "Penalty strength base; eta_t = t * eta0");
    app->add_option("--penalty-placement", penalty_placement, "per-step | terminal");
    app->add_option("--ranking", ranking, "sum | mean");
    app->add_option("--min-len", min_len);
    app->add_option("--max-len", max_len);
    app->add_option("--n-min", n_min, "Smallest n of the overlap profile");
    app->add_option("--n-max", n_max, "Largest n of the overlap profile");
    app->add_option("--seed", seed, "Synthetic model seed");
    app->add_option("--p-switch", p_switch, "Synthetic model generation-step probability");
    app->add_option("--vocab-size", vocab_size, "Synthetic model vocabulary size");
    app->add_option("--jobs", jobs, "Worker threads");
  }

  json ToJson() const {
    json out = json::object();
    auto put = [&out](const char* key, const auto& value) {
      if (value) out[key] = *value;
    };
    put("scripted_model", scripted_model);
    put("mode", mode);
    put("beam_size", beam_size);
    put("m_star", m_star);
    put("eta0", eta0);
    put("penalty_placement", penalty_placement);
    put("ranking", ranking);
    put("min_len", min_len);
    put("max_len", max_len);
    put("n_min", n_min);
    put("n_max", n_max);
    put("seed", seed);
    put("p_switch", p_switch);
    put("vocab_size", vocab_size);
    put("jobs", jobs);
    return out;
  }
};

RunConfig Resolve(RunConfig base, const std::optional<std::string>& file,
                  const DecodeFlags& flags) {
  if (file) base = copyctl::LoadConfigFile(*file, std::move(base));
  base = copyctl::ApplyConfigJson(flags.ToJson(), std::move(base));
  base.Validate();
  return base;
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw copyctl::InputError("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Copy-controlled beam search and extractiveness audit toolkit"};
  app.require_subcommand(1);

  copyctl::SyntheticCorpusParams gen;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus");
  generate->add_option("--seed", gen.seed);
  generate->add_option("--n-docs", gen.n_docs);
  generate->add_option("--vocab-size", gen.vocab_size);
  generate->add_option("--min-doc-len", gen.min_len);
  generate->add_option("--max-doc-len", gen.max_len);
  generate->add_option("-o,--out", gen_out, "Output corpus file")->required();

  std::string corpus_path;
  std::string out_dir;
  std::optional<std::string> config_file;
  DecodeFlags decode_flags;
  auto* decode = app.add_subcommand("decode", "Decode a corpus and report metrics");
  decode->add_option("corpus", corpus_path)->required();
  decode->add_option("--out-dir", out_dir)->required();
  decode->add_option("--config", config_file, "JSON config; flags win on conflict");
  decode_flags.Register(decode);

  std::optional<std::string> config_a, config_b;
  DecodeFlags compare_flags;
  auto* compare = app.add_subcommand(
      "compare", "Decode under configs A (default standard) and B (default copy-controlled)");
  compare->add_option("corpus", corpus_path)->required();
  compare->add_option("--out-dir", out_dir)->required();
  compare->add_option("--config-a", config_a);
  compare->add_option("--config-b", config_b);
  compare_flags.Register(compare);

  std::string summaries_path;
  std::string audit_out;
  int audit_n_min = 2, audit_n_max = 25;
  auto* audit = app.add_subcommand("audit", "Overlap and ROUGE audit of given summaries");
  audit->add_option("corpus", corpus_path)->required();
  audit->add_option("summaries", summaries_path)->required();
  audit->add_option("-o,--out", audit_out)->required();
  audit->add_option("--n-min", audit_n_min);
  audit->add_option("--n-max", audit_n_max);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (generate->parsed()) {
      const auto corpus = copyctl::GenerateSyntheticCorpus(gen);
      std::ofstream out(gen_out, std::ios::binary);
      if (!out) throw copyctl::InputError("cannot write " + gen_out);
      copyctl::WriteCorpus(out, corpus);
    } else if (decode->parsed()) {
      const RunConfig config = Resolve(RunConfig{}, config_file, decode_flags);
      const auto corpus = copyctl::ReadCorpus(corpus_path);
      const auto output = copyctl::RunDecode(corpus, config);
      EnsureDir(out_dir);
      copyctl::WriteRunOutput(output, config, fs::path(out_dir) / "results.jsonl",
                              fs::path(out_dir) / "report.json");
    } else if (compare->parsed()) {
      RunConfig base_a, base_b;
      base_b.decode.scorer.mode = copyctl::ScoringMode::kCopyControlled;
      const RunConfig a = Resolve(base_a, config_a, compare_flags);
      const RunConfig b = Resolve(base_b, config_b, compare_flags);
      const auto corpus = copyctl::ReadCorpus(corpus_path);
      const auto out_a = copyctl::RunDecode(corpus, a);
      const auto out_b = copyctl::RunDecode(corpus, b);
      EnsureDir(out_dir);
      const fs::path dir(out_dir);
      copyctl::WriteRunOutput(out_a, a, dir / "results_a.jsonl", dir / "report_a.json");
      copyctl::WriteRunOutput(out_b, b, dir / "results_b.jsonl", dir / "report_b.json");
      copyctl::WriteJson(copyctl::ComparisonJson(out_a, a, out_b, b),
                         dir / "comparison.json");
    } else if (audit->parsed()) {
      const auto corpus = copyctl::ReadCorpus(corpus_path);
      const auto summaries = copyctl::ReadSummaries(summaries_path);
      copyctl::WriteJson(
          copyctl::RunAudit(corpus, summaries, audit_n_min, audit_n_max),
          audit_out);
    }
  } catch (const copyctl::ModelOutputError& e) {
    std::cerr << "model contract violation: " << e.what() << '\n';
    return kExitModel;
  } catch (const copyctl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
