// Copyright (c) 2026 dfa-mt authors
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

#include <fstream>
#include <iostream>
#include <limits>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dfa/experiment.hpp"

namespace {

using dfa::ExperimentConfig;
using dfa::ExperimentRunner;

std::vector<std::size_t> parse_ks(const std::vector<std::string>& raw) {
  std::vector<std::size_t> ks;
  for (const auto& item : raw) {
    if (item == "inf" || item == "max" || item == "unlimited") {
      ks.push_back(std::numeric_limits<std::size_t>::max());
    } else {
      ks.push_back(static_cast<std::size_t>(std::stoull(item)));
    }
  }
  return ks;
}

int run_extract_poly(const std::string& lexicon_path,
                     const std::string& embeddings_path,
                     const std::string& source_lang,
                     const std::string& target_lang, const std::string& out,
                     const std::string& mode, double threshold,
                     const std::string& linkage, std::size_t min_embedded,
                     std::size_t jobs) {
  auto lexicon =
      dfa::load_lexicon_file(lexicon_path, source_lang, target_lang);
  auto candidates = dfa::multi_translation_set(lexicon);

  if (mode == "simple") {
    dfa::PolyFilterResult result;
    result.words = candidates;
    result.candidates = candidates.size();
    dfa::write_csu_set_file(result, out);
    std::cout << "candidates=" << result.candidates
              << " kept=" << result.words.size() << " (simple mode)\n";
    return 0;
  }

  if (embeddings_path.empty()) {
    std::cerr << "--embeddings is required in filtered mode\n";
    return 2;
  }
  std::set<std::string> vocab;
  for (const auto& word : candidates) {
    const auto& targets = lexicon.entries.at(word);
    vocab.insert(targets.begin(), targets.end());
  }
  auto table = dfa::load_embeddings_file(embeddings_path, vocab, target_lang);

  dfa::ClusterParams params;
  params.distance_threshold = threshold;
  params.linkage = dfa::linkage_from_string(linkage);
  params.min_embedded_translations = min_embedded;

  auto result = dfa::build_polysemous_csu_set(lexicon, table, params, jobs);
  dfa::write_csu_set_file(result, out);
  std::cout << "candidates=" << result.candidates
            << " filtered=" << result.filtered()
            << " oov_dropped=" << result.oov_dropped << "\n"
            << "wrote " << out << " and " << out << ".stats.json\n";
  return 0;
}

int render_and_report(ExperimentRunner& runner, dfa::ExperimentReport report,
                      const std::string& out_dir) {
  const std::string target =
      out_dir.empty() ? runner.config().output_dir : out_dir;
  if (target.empty()) {
    std::cout << dfa::report_to_json(report);
    return 0;
  }
  dfa::render_report(report, target);
  std::cout << "wrote report to " << target << "\n";
  for (const auto& system : report.systems) {
    std::cout << "  " << system.name << ": bleu=" << system.metrics.bleu
              << " bleu4=" << system.metrics.bleu4
              << " chrf2=" << system.metrics.chrf2
              << " failure_rate=" << system.failure_rate << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic-focus-anchoring toolkit for LLM machine translation"};
  app.require_subcommand(1);

  // extract-poly
  std::string lexicon_path, embeddings_path, source_lang, target_lang, out;
  std::string mode = "filtered", linkage = "average";
  double threshold = 0.5;
  std::size_t min_embedded = 2, jobs = 1;
  auto* extract = app.add_subcommand(
      "extract-poly", "Build the polysemous CSU set from a bilingual lexicon");
  extract->add_option("--lexicon", lexicon_path)->required();
  extract->add_option("--embeddings", embeddings_path);
  extract->add_option("--source-lang", source_lang)->required();
  extract->add_option("--target-lang", target_lang)->required();
  extract->add_option("--out", out)->required();
  extract->add_option("--mode", mode)->check(CLI::IsMember({"filtered", "simple"}));
  extract->add_option("--threshold", threshold);
  extract->add_option("--linkage", linkage)
      ->check(CLI::IsMember({"average", "complete"}));
  extract->add_option("--min-embedded", min_embedded);
  extract->add_option("--jobs", jobs);

  // config-driven subcommands
  std::string config_path, out_dir, identify_out, system_name = "dfa";
  std::vector<std::string> ks_raw;
  auto* identify = app.add_subcommand(
      "identify", "Write per-sentence CSU sets as JSON Lines");
  identify->add_option("--config", config_path)->required();
  identify->add_option("--out", identify_out)->required();

  auto* translate =
      app.add_subcommand("translate", "Run one system over the test set");
  translate->add_option("--config", config_path)->required();
  translate->add_option("--system", system_name)
      ->check(CLI::IsMember({"baseline", "dfa"}));
  translate->add_option("--out-dir", out_dir);

  auto* ablate = app.add_subcommand(
      "ablate", "Run baseline, dfa and the per-kind ablation rows");
  ablate->add_option("--config", config_path)->required();
  ablate->add_option("--out-dir", out_dir);

  auto* sweep = app.add_subcommand("k-sweep", "Sweep the CSU cap k");
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--ks", ks_raw)->delimiter(',')->required();
  sweep->add_option("--out-dir", out_dir);

  // score
  std::string hyp_path, ref_path, score_lang;
  auto* score = app.add_subcommand(
      "score", "Score existing outputs (BLEU, BLEU4, chrF2)");
  score->add_option("--hyp", hyp_path)->required();
  score->add_option("--ref", ref_path)->required();
  score->add_option("--target-lang", score_lang)->required();

  // dump-templates
  std::string dump_pair;
  auto* dump = app.add_subcommand("dump-templates",
                                  "Print the built-in prompt templates");
  dump->add_option("--pair", dump_pair);

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract->parsed()) {
      return run_extract_poly(lexicon_path, embeddings_path, source_lang,
                              target_lang, out, mode, threshold, linkage,
                              min_embedded, jobs);
    }
    if (identify->parsed()) {
      ExperimentRunner runner(dfa::load_experiment_config(config_path));
      std::ofstream file(identify_out, std::ios::binary);
      if (!file) {
        std::cerr << "cannot write " << identify_out << "\n";
        return 2;
      }
      file << runner.identify_to_jsonl();
      std::cout << "wrote " << identify_out << "\n";
      return 0;
    }
    if (translate->parsed()) {
      ExperimentRunner runner(dfa::load_experiment_config(config_path));
      auto report = runner.make_report();
      report.systems.push_back(
          runner.run_system(system_name == "baseline"
                                ? dfa::SystemKind::kBaseline
                                : dfa::SystemKind::kDfa));
      return render_and_report(runner, std::move(report), out_dir);
    }
    if (ablate->parsed()) {
      ExperimentRunner runner(dfa::load_experiment_config(config_path));
      return render_and_report(runner, runner.run_ablation_suite(), out_dir);
    }
    if (sweep->parsed()) {
      ExperimentRunner runner(dfa::load_experiment_config(config_path));
      auto report = runner.make_report();
      report.k_sweep = runner.run_k_sweep(parse_ks(ks_raw));
      return render_and_report(runner, std::move(report), out_dir);
    }
    if (score->parsed()) {
      auto set = dfa::load_parallel_testset(hyp_path, ref_path);
      dfa::Corpus corpus{set.sources, set.references, score_lang};
      auto metrics = dfa::score_corpus(corpus);
      nlohmann::ordered_json j = {
          {"bleu", metrics.bleu},
          {"bleu4", metrics.bleu4},
          {"chrf2", metrics.chrf2},
          {"precisions",
           std::vector<double>(metrics.per_ngram_precisions.begin(),
                               metrics.per_ngram_precisions.end())},
          {"bp", metrics.brevity_penalty},
          {"n_segments", metrics.segment_count},
          {"signature", dfa::metric_signature(score_lang)}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (dump->parsed()) {
      if (dump_pair.empty()) {
        std::cout << dfa::templates_to_json(dfa::all_builtin_templates());
      } else {
        auto dash = dump_pair.find('-');
        if (dash == std::string::npos) {
          std::cerr << "--pair must look like en-zh\n";
          return 2;
        }
        auto set = dfa::builtin_templates(dump_pair.substr(0, dash),
                                          dump_pair.substr(dash + 1));
        std::cout << dfa::templates_to_json({set});
      }
      return 0;
    }
  } catch (const dfa::RunAborted& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "completed " << e.partial().per_sentence.size()
              << " sentences before aborting (partial results persisted)\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
