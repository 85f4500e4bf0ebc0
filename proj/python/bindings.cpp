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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "copyctl/beam.hpp"
#include "copyctl/core.hpp"
#include "copyctl/corpus.hpp"
#include "copyctl/errors.hpp"
#include "copyctl/metrics.hpp"
#include "copyctl/oracle.hpp"
#include "copyctl/runner.hpp"
#include "copyctl/step_model.hpp"

namespace py = pybind11;
using namespace copyctl;

namespace {

using Tokens = std::vector<std::string>;

RunConfig ParseConfig(const std::string& config_json) {
  return ApplyConfigJson(nlohmann::json::parse(config_json), RunConfig{});
}

py::dict ResultDict(const DecodeResult& r) {
  py::dict out;
  out["tokens"] = r.tokens;
  out["ids"] = r.ids;
  out["m"] = r.m;
  out["m_bar"] = r.m_bar;
  out["cum_logp"] = r.cum_logp;
  out["score"] = r.score;
  out["length"] = r.length;
  return out;
}

py::dict PrfDict(const PrfScore& s) {
  py::dict out;
  out["recall"] = s.recall;
  out["precision"] = s.precision;
  out["f1"] = s.f1;
  return out;
}

py::dict MixByToken(const Tokens& gen_vocab, const Tokens& source,
                    const std::map<std::string, double>& p_gen,
                    const std::vector<double>& alpha, double m) {
  const Vocabulary vocab(gen_vocab);
  const SourceDocument doc = ExtendVocabulary(vocab, source, "doc");
  StepOutput step;
  step.p_gen.assign(vocab.size(), 0.0);
  for (const auto& [token, p] : p_gen) {
    if (!vocab.contains(token)) throw ValidationError("'" + token + "' is not in gen_vocab");
    step.p_gen[vocab.id(token)] = p;
  }
  step.alpha = alpha;
  step.m = m;
  ValidateStepOutput(step, vocab.size(), doc.length(), kModelMassTolerance);
  const ExtendedDistribution mixed = MixDistributions(step, doc);
  py::dict out;
  for (std::size_t w = 0; w < mixed.probs.size(); ++w) {
    out[py::str(doc.token_string(vocab, static_cast<TokenId>(w)))] = mixed.probs[w];
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_copyctl, m) {
  m.doc() = "Copy-controlled beam search and extractiveness metrics.";

  static py::exception<Error> base_error(m, "CopyctlError", PyExc_RuntimeError);
  static py::exception<ModelOutputError> model_error(m, "ModelOutputError", base_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ModelOutputError& e) {
      py::set_error(model_error, e.what());
    } catch (const Error& e) {
      py::set_error(base_error, e.what());
    } catch (const nlohmann::json::exception& e) {
      py::set_error(base_error, e.what());
    }
  });

  m.def("extend_vocabulary",
        [](const Tokens& gen_vocab, const Tokens& tokens, const std::string& doc_id) {
          const Vocabulary vocab(gen_vocab);
          const SourceDocument doc = ExtendVocabulary(vocab, tokens, doc_id);
          py::dict out;
          out["extended_ids"] = doc.extended_ids;
          out["oov_tokens"] = doc.oov_tokens;
          out["vocab_size"] = doc.vocab_size;
          out["extended_size"] = doc.extended_size();
          return out;
        },
        py::arg("gen_vocab"), py::arg("tokens"), py::arg("doc_id") = "doc");
  m.def("mix", &MixByToken, py::arg("gen_vocab"), py::arg("source"), py::arg("p_gen"),
        py::arg("alpha"), py::arg("m"),
        "Mixed distribution over the extended vocabulary, keyed by token.");
  m.def("eta_at", &EtaAt, py::arg("t"), py::arg("eta0"));
  m.def("copy_penalty", &CopyPenalty, py::arg("m_bar"), py::arg("m_star"), py::arg("eta_t"));

  m.def("ngram_overlap", &NgramOverlap, py::arg("article"), py::arg("summary"), py::arg("n"));
  m.def("naive_overlap", &NaiveOverlap, py::arg("article"), py::arg("summary"), py::arg("n"));
  m.def("overlap_profile",
        [](const Tokens& article, const Tokens& summary, int n_min, int n_max) {
          return ComputeOverlapProfile(article, summary, n_min, n_max).per_n;
        },
        py::arg("article"), py::arg("summary"), py::arg("n_min") = 2, py::arg("n_max") = 25);
  m.def("rouge_n",
        [](const Tokens& ref, const Tokens& cand, int n) { return PrfDict(RougeN(ref, cand, n)); },
        py::arg("reference"), py::arg("candidate"), py::arg("n"));
  m.def("rouge_l",
        [](const Tokens& ref, const Tokens& cand) { return PrfDict(RougeL(ref, cand)); },
        py::arg("reference"), py::arg("candidate"));

  py::class_<ScriptedModel>(m, "ScriptedModel")
      .def_property_readonly("doc_ids",
                             [](const ScriptedModel& model) {
                               Tokens ids;
                               for (const auto& [id, doc] : model.sources()) ids.push_back(id);
                               return ids;
                             })
      .def("_decode",
           [](const ScriptedModel& model, const std::string& doc_id,
              const std::string& config_json) {
             const RunConfig config = ParseConfig(config_json);
             config.decode.Validate();
             return ResultDict(DecodeRecord(model, model.source(doc_id), config.decode));
           })
      .def("_exhaustive",
           [](const ScriptedModel& model, const std::string& doc_id,
              const std::string& config_json) {
             const RunConfig config = ParseConfig(config_json);
             const SourceDocument& doc = model.source(doc_id);
             const Hypothesis best = ExhaustiveDecode(model, doc, config.decode);
             Tokens tokens;
             for (TokenId id : best.tokens) tokens.push_back(doc.token_string(model.vocabulary(), id));
             py::dict out;
             out["tokens"] = tokens;
             out["score"] = best.final_score;
             return out;
           });
  m.def("load_scripted", [](const std::filesystem::path& path) { return LoadScripted(path); },
        py::arg("path"));
  m.def("parse_scripted", &ParseScripted, py::arg("text"));

  m.def("_decode_synthetic", [](const Tokens& article, const std::string& config_json) {
    const RunConfig config = ParseConfig(config_json);
    config.Validate();
    const SyntheticCopyModel model(*config.synthetic);
    const SourceDocument doc = ExtendVocabulary(model.vocabulary(), article, "doc");
    return ResultDict(DecodeRecord(model, doc, config.decode));
  });

  m.def("generate_corpus",
        [](std::uint64_t seed, int n_docs, int vocab_size, int min_len, int max_len) {
          const auto records = GenerateSyntheticCorpus(
              SyntheticCorpusParams{seed, n_docs, vocab_size, min_len, max_len});
          py::list out;
          for (const auto& r : records) {
            py::dict row;
            row["id"] = r.id;
            row["article"] = JoinTokens(r.article);
            row["reference"] = JoinTokens(r.reference);
            out.append(row);
          }
          return out;
        },
        py::arg("seed") = 1, py::arg("n_docs") = 200, py::arg("vocab_size") = 50,
        py::arg("min_len") = 40, py::arg("max_len") = 120);

  m.def("_run_decode", [](const std::vector<std::tuple<std::string, std::string, std::string>>& rows,
                          const std::string& config_json) {
    std::vector<CorpusRecord> corpus;
    for (const auto& [id, article, reference] : rows) {
      corpus.push_back({id, SplitTokens(article), SplitTokens(reference)});
    }
    const RunConfig config = ParseConfig(config_json);
    RunOutput output;
    {
      py::gil_scoped_release release;
      output = RunDecode(corpus, config);
    }
    ordered_json documents = ordered_json::array();
    for (const auto& doc : output.documents) documents.push_back(DocumentJson(doc));
    return ordered_json{{"report", CorpusReportJson(output.report, config)},
                        {"documents", documents}}
        .dump();
  });
}
