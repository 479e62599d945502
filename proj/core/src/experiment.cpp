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

#include "dfa/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "dfa/digest.hpp"
#include "dfa/errors.hpp"
#include "dfa/unicode.hpp"

namespace fs = std::filesystem;

namespace dfa {

std::string to_string(PolyMode mode) {
  switch (mode) {
    case PolyMode::kOff: return "off";
    case PolyMode::kSimple: return "simple";
    case PolyMode::kFiltered: return "filtered";
  }
  return "off";
}

PolyMode poly_mode_from_string(const std::string& name) {
  if (name == "off") return PolyMode::kOff;
  if (name == "simple") return PolyMode::kSimple;
  if (name == "filtered") return PolyMode::kFiltered;
  throw FormatError("unknown poly_mode: " + name);
}

void ExperimentConfig::validate() const {
  if (source_lang.empty() || target_lang.empty()) {
    throw ContractError("config: source/target language codes are required");
  }
  if (source_path.empty() || reference_path.empty()) {
    throw ContractError("config: source_path and reference_path are required");
  }
  if (k == 0) throw ContractError("config: k must be positive");
  if (poly_mode == PolyMode::kFiltered &&
      (lexicon_path.empty() || embeddings_path.empty())) {
    throw ContractError(
        "config: poly_mode 'filtered' requires lexicon_path and "
        "embeddings_path");
  }
  if (poly_mode == PolyMode::kSimple && lexicon_path.empty()) {
    throw ContractError("config: poly_mode 'simple' requires lexicon_path");
  }
  if (backend.kind == BackendKind::kReplay && backend.cache_path.empty()) {
    throw ContractError("config: replay backend requires cache_path");
  }
  if (backend.decode.temperature < 0.0) {
    throw ContractError("config: decode temperature must be >= 0");
  }
  if (cluster_params.distance_threshold <= 0.0 ||
      cluster_params.distance_threshold > 2.0) {
    throw ContractError("config: distance_threshold must lie in (0, 2]");
  }
}

namespace {

std::set<CsuKind> kinds_from_json(const nlohmann::json& arr) {
  std::set<CsuKind> kinds;
  for (const auto& item : arr) {
    kinds.insert(csu_kind_from_string(item.get<std::string>()));
  }
  return kinds;
}

nlohmann::ordered_json kinds_to_json(const std::set<CsuKind>& kinds) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (CsuKind kind :
       {CsuKind::kPolysemous, CsuKind::kDomainSpecific, CsuKind::kCultural}) {
    if (kinds.count(kind)) arr.push_back(to_string(kind));
  }
  return arr;
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp.string());
    out << content;
    out.close();
    if (!out) throw Error("write failed for: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot finalize file " + path.string() + ": " + ec.message());
  }
}

// Runs fn(0..count) over `workers` threads, marking completion per index.
// The first exception stops new work and is rethrown after joining.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn,
                  std::vector<char>* done_flags) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < count;
         i = next.fetch_add(1)) {
      if (stop.load(std::memory_order_relaxed)) return;
      try {
        fn(i);
        if (done_flags) (*done_flags)[i] = 1;
      } catch (...) {
        {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  if (workers <= 1 || count <= 1) {
    body();
  } else {
    std::vector<std::thread> threads;
    std::size_t n = std::min(workers, count);
    threads.reserve(n);
    for (std::size_t i = 0; i < n; ++i) threads.emplace_back(body);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

nlohmann::ordered_json metrics_to_json(const MetricReport& metrics) {
  return {{"bleu", metrics.bleu},
          {"bleu4", metrics.bleu4},
          {"chrf2", metrics.chrf2},
          {"precisions",
           std::vector<double>(metrics.per_ngram_precisions.begin(),
                               metrics.per_ngram_precisions.end())},
          {"bp", metrics.brevity_penalty},
          {"n_segments", metrics.segment_count},
          {"empty_hypotheses", metrics.empty_hypotheses}};
}

nlohmann::ordered_json sentence_to_json(const SentenceRecord& record) {
  nlohmann::ordered_json csus = nlohmann::ordered_json::array();
  for (const auto& csu : record.csus) {
    csus.push_back({{"surface", csu.surface},
                    {"kind", to_string(csu.kind)},
                    {"offset", csu.first_offset}});
  }
  return {{"id", record.id},         {"source", record.source},
          {"reference", record.reference}, {"prompt", record.prompt},
          {"csus", csus},            {"raw", record.raw},
          {"extracted", record.extracted}, {"failed", record.failed}};
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad config JSON in " + path + ": " + e.what());
  }

  ExperimentConfig config;
  try {
    const auto& pair = j.at("pair");
    config.source_lang = fold_case(pair.at("source").get<std::string>());
    config.target_lang = fold_case(pair.at("target").get<std::string>());
    config.source_path = j.value("source_path", "");
    config.reference_path = j.value("reference_path", "");
    config.lexicon_path = j.value("lexicon_path", "");
    config.embeddings_path = j.value("embeddings_path", "");
    config.k = j.value("k", std::size_t{8});
    if (j.contains("enabled_kinds")) {
      config.enabled_kinds = kinds_from_json(j.at("enabled_kinds"));
    }
    config.poly_mode = poly_mode_from_string(j.value("poly_mode", "filtered"));
    if (j.contains("cluster_params")) {
      const auto& cp = j.at("cluster_params");
      config.cluster_params.distance_threshold =
          cp.value("distance_threshold", 0.5);
      config.cluster_params.linkage =
          linkage_from_string(cp.value("linkage", "average"));
      config.cluster_params.min_embedded_translations =
          cp.value("min_embedded_translations", std::size_t{2});
    }
    if (j.contains("backend")) {
      const auto& b = j.at("backend");
      config.backend.kind = backend_kind_from_string(b.value("kind", "replay"));
      config.backend.endpoint = b.value("endpoint", "");
      config.backend.model_id = b.value("model_id", "");
      config.backend.auth = b.value("auth", "");
      if (b.contains("decode")) {
        const auto& d = b.at("decode");
        config.backend.decode.max_length =
            d.value("max_length", std::size_t{256});
        config.backend.decode.beam_width = d.value("beam_width", std::size_t{5});
        config.backend.decode.temperature = d.value("temperature", 0.0);
      }
      config.backend.concurrency_limit =
          b.value("concurrency_limit", std::size_t{4});
      if (b.contains("retry")) {
        const auto& r = b.at("retry");
        config.backend.retry.max_attempts =
            r.value("max_attempts", std::size_t{3});
        config.backend.retry.backoff_base_ms =
            r.value("backoff_base_ms", std::size_t{250});
      }
      if (b.contains("request_mapping")) {
        const auto& m = b.at("request_mapping");
        config.backend.mapping.model_field = m.value("model_field", "model");
        config.backend.mapping.input_field = m.value("input_field", "prompt");
        config.backend.mapping.response_text_pointer =
            m.value("response_text_pointer", "/choices/0/text");
        if (m.contains("extra_body") && !m.at("extra_body").is_null()) {
          config.backend.mapping.extra_body_json = m.at("extra_body").dump();
        }
      }
      config.backend.cache_path = b.value("cache_path", "");
      config.backend.record = b.value("record", false);
    }
    config.templates_path = j.value("templates_path", "");
    config.output_dir = j.value("output_dir", "");
    config.seed = j.value("seed", 0L);
    config.jobs = j.value("jobs", std::size_t{1});
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad config field in " + path + ": " + e.what());
  }

  // The only environment override: the backend credential reference.
  if (const char* auth = std::getenv("DFA_BACKEND_AUTH")) {
    config.backend.auth = auth;
  }
  return config;
}

std::string experiment_config_to_json(const ExperimentConfig& config,
                                      bool redact_auth) {
  nlohmann::ordered_json j;
  j["pair"] = {{"source", config.source_lang}, {"target", config.target_lang}};
  j["source_path"] = config.source_path;
  j["reference_path"] = config.reference_path;
  j["lexicon_path"] = config.lexicon_path;
  j["embeddings_path"] = config.embeddings_path;
  j["k"] = config.k;
  j["enabled_kinds"] = kinds_to_json(config.enabled_kinds);
  j["poly_mode"] = to_string(config.poly_mode);
  j["cluster_params"] = {
      {"distance_threshold", config.cluster_params.distance_threshold},
      {"linkage", to_string(config.cluster_params.linkage)},
      {"min_embedded_translations",
       config.cluster_params.min_embedded_translations}};
  nlohmann::ordered_json backend;
  backend["kind"] = to_string(config.backend.kind);
  backend["endpoint"] = config.backend.endpoint;
  backend["model_id"] = config.backend.model_id;
  backend["auth"] = (redact_auth && !config.backend.auth.empty())
                        ? "***"
                        : config.backend.auth;
  backend["decode"] = {{"max_length", config.backend.decode.max_length},
                       {"beam_width", config.backend.decode.beam_width},
                       {"temperature", config.backend.decode.temperature}};
  backend["concurrency_limit"] = config.backend.concurrency_limit;
  backend["retry"] = {{"max_attempts", config.backend.retry.max_attempts},
                      {"backoff_base_ms", config.backend.retry.backoff_base_ms}};
  nlohmann::ordered_json mapping;
  mapping["model_field"] = config.backend.mapping.model_field;
  mapping["input_field"] = config.backend.mapping.input_field;
  mapping["response_text_pointer"] =
      config.backend.mapping.response_text_pointer;
  if (!config.backend.mapping.extra_body_json.empty()) {
    mapping["extra_body"] =
        nlohmann::json::parse(config.backend.mapping.extra_body_json);
  }
  backend["request_mapping"] = mapping;
  backend["cache_path"] = config.backend.cache_path;
  backend["record"] = config.backend.record;
  j["backend"] = backend;
  j["templates_path"] = config.templates_path;
  j["output_dir"] = config.output_dir;
  j["seed"] = config.seed;
  j["jobs"] = config.jobs;
  return j.dump(2) + "\n";
}

ParallelTestSet load_parallel_testset(const std::string& source_path,
                                      const std::string& reference_path) {
  auto read_lines = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open test set file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (!utf8_valid(text)) {
      throw FormatError("test set file is not valid UTF-8: " + path);
    }
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      std::string line = (eol == std::string::npos)
                             ? text.substr(pos)
                             : text.substr(pos, eol - pos);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      if (eol == std::string::npos) break;
      pos = eol + 1;
    }
    return lines;
  };

  ParallelTestSet set;
  set.sources = read_lines(source_path);
  set.references = read_lines(reference_path);
  if (set.sources.size() != set.references.size()) {
    throw Error("test set line counts differ: " +
                std::to_string(set.sources.size()) + " != " +
                std::to_string(set.references.size()) + " (" + source_path +
                " vs " + reference_path + ")");
  }
  set.ids.reserve(set.sources.size());
  for (std::size_t i = 0; i < set.sources.size(); ++i) {
    set.ids.push_back(std::to_string(i));
  }
  return set;
}

// ---------------------------------------------------------------------------
// ExperimentRunner

ExperimentRunner::ExperimentRunner(ExperimentConfig config,
                                   std::shared_ptr<Transport> transport)
    : config_(std::move(config)) {
  config_.validate();
  test_set_ = load_parallel_testset(config_.source_path,
                                    config_.reference_path);
  templates_ = config_.templates_path.empty()
                   ? builtin_templates(config_.source_lang, config_.target_lang)
                   : load_templates_for_pair(config_.templates_path,
                                             config_.source_lang,
                                             config_.target_lang);

  input_digests_["source"] = sha256_file_hex(config_.source_path);
  input_digests_["reference"] = sha256_file_hex(config_.reference_path);
  if (!config_.templates_path.empty()) {
    input_digests_["templates"] = sha256_file_hex(config_.templates_path);
  }

  if (config_.poly_mode != PolyMode::kOff && !config_.lexicon_path.empty()) {
    TranslationMap lexicon = load_lexicon_file(
        config_.lexicon_path, config_.source_lang, config_.target_lang);
    input_digests_["lexicon"] = sha256_file_hex(config_.lexicon_path);
    simple_poly_set_ = multi_translation_set(lexicon);

    if (config_.poly_mode == PolyMode::kFiltered) {
      // Only translations of multi-translation candidates need vectors.
      std::set<std::string> vocab;
      for (const auto& word : simple_poly_set_) {
        const auto& targets = lexicon.entries.at(word);
        vocab.insert(targets.begin(), targets.end());
      }
      EmbeddingTable table = load_embeddings_file(
          config_.embeddings_path, vocab, config_.target_lang);
      input_digests_["embeddings"] = sha256_file_hex(config_.embeddings_path);
      poly_filter_ = build_polysemous_csu_set(lexicon, table,
                                              config_.cluster_params,
                                              std::max<std::size_t>(1,
                                                                    config_.jobs));
      filtered_poly_set_ = poly_filter_->words;
    }
  }

  client_ = std::make_unique<LlmClient>(config_.backend, std::move(transport));
  if (!config_.backend.cache_path.empty() &&
      fs::exists(config_.backend.cache_path)) {
    input_digests_["cache"] = sha256_file_hex(config_.backend.cache_path);
  }
}

void ExperimentRunner::ensure_identified() {
  if (identified_) return;
  const std::size_t n = test_set_.sources.size();
  identified_sentences_.assign(n, {});

  const bool wants_internal =
      config_.enabled_kinds.count(CsuKind::kDomainSpecific) > 0 ||
      config_.enabled_kinds.count(CsuKind::kCultural) > 0;

  auto identify_one = [&](std::size_t i) {
    IdentifiedSentence& ident = identified_sentences_[i];
    const std::string& sentence = test_set_.sources[i];
    if (sentence.empty()) return;
    if (!simple_poly_set_.empty()) {
      ident.poly_simple =
          match_polysemous(sentence, config_.source_lang, simple_poly_set_);
    }
    if (!filtered_poly_set_.empty()) {
      ident.poly_filtered =
          match_polysemous(sentence, config_.source_lang, filtered_poly_set_);
    }
    if (wants_internal) {
      ElicitationResult elicited = elicit_internal_csus(
          sentence, *client_, templates_, test_set_.ids[i]);
      auto records = filter_in_sentence(elicited.candidates, sentence,
                                        config_.source_lang);
      for (auto& record : records) {
        if (record.kind == CsuKind::kDomainSpecific) {
          ident.domain.push_back(record);
        } else if (record.kind == CsuKind::kCultural) {
          ident.cultural.push_back(record);
        }
      }
    }
  };

  std::size_t workers =
      wants_internal ? std::max<std::size_t>(1, config_.backend.concurrency_limit)
                     : std::max<std::size_t>(1, config_.jobs);
  parallel_for(n, workers, identify_one, nullptr);
  identified_ = true;
}

CsuSet ExperimentRunner::assemble_for(const IdentifiedSentence& ident,
                                      const std::set<CsuKind>& kinds,
                                      PolyMode poly_source,
                                      std::size_t k_cap) const {
  static const std::vector<CsuRecord> kNone;
  const std::vector<CsuRecord>* poly = &kNone;
  if (kinds.count(CsuKind::kPolysemous) && poly_source != PolyMode::kOff) {
    poly = poly_source == PolyMode::kSimple ? &ident.poly_simple
                                            : &ident.poly_filtered;
  }
  const std::vector<CsuRecord>& dom =
      kinds.count(CsuKind::kDomainSpecific) ? ident.domain : kNone;
  const std::vector<CsuRecord>& cul =
      kinds.count(CsuKind::kCultural) ? ident.cultural : kNone;
  return assemble_csu_set(*poly, dom, cul, k_cap, config_.source_lang);
}

SystemResult ExperimentRunner::run_row(const std::string& name,
                                       const std::set<CsuKind>& kinds,
                                       PolyMode poly_source, std::size_t k_cap,
                                       bool base_prompt_only) {
  ensure_identified();
  const std::size_t n = test_set_.sources.size();

  SystemResult result;
  result.name = name;
  result.per_sentence.assign(n, {});
  std::vector<char> done(n, 0);

  auto translate_one = [&](std::size_t i) {
    SentenceRecord& record = result.per_sentence[i];
    record.id = test_set_.ids[i];
    record.source = test_set_.sources[i];
    record.reference = test_set_.references[i];
    if (record.source.empty()) {
      record.failed = true;  // nothing to translate
      return;
    }

    PromptSpec prompt;
    if (base_prompt_only) {
      prompt = build_base_prompt(record.source, templates_, record.id);
    } else {
      CsuSet csus =
          assemble_for(identified_sentences_[i], kinds, poly_source, k_cap);
      prompt = build_enhanced_prompt(record.source, csus, templates_,
                                     record.id);
      record.csus = csus.records;
    }
    record.prompt = prompt.text;

    TranslationResult translated =
        run_translation(*client_, prompt, config_.target_lang);
    record.raw = translated.raw_output;
    record.extracted = translated.extracted;
    record.failed = detect_task_failure(record.extracted, record.source,
                                        config_.target_lang);
  };

  try {
    parallel_for(n, std::max<std::size_t>(1, config_.backend.concurrency_limit),
                 translate_one, &done);
  } catch (const std::exception& e) {
    // Persist what completed, then surface the abort.
    SystemResult partial;
    partial.name = name;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) partial.per_sentence.push_back(result.per_sentence[i]);
    }
    if (!config_.output_dir.empty()) {
      std::error_code ec;
      fs::create_directories(config_.output_dir, ec);
      if (!ec) {
        nlohmann::ordered_json partial_json;
        partial_json["system"] = name;
        partial_json["error"] = e.what();
        auto arr = nlohmann::ordered_json::array();
        for (const auto& rec : partial.per_sentence) {
          arr.push_back(sentence_to_json(rec));
        }
        partial_json["per_sentence"] = arr;
        write_file_atomic(fs::path(config_.output_dir) /
                              ("partial_" + name + ".json"),
                          partial_json.dump(2) + "\n");
      }
    }
    throw RunAborted("system '" + name + "' aborted: " + e.what(),
                     std::move(partial));
  }

  Corpus corpus;
  corpus.language = config_.target_lang;
  std::size_t failures = 0;
  for (const auto& record : result.per_sentence) {
    corpus.hypotheses.push_back(record.extracted);
    corpus.references.push_back(record.reference);
    if (record.failed) ++failures;
  }
  result.metrics = score_corpus(corpus);
  result.failure_rate =
      n == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(n);
  return result;
}

SystemResult ExperimentRunner::run_system(SystemKind kind) {
  if (kind == SystemKind::kBaseline) {
    return run_row("baseline", {}, PolyMode::kOff, config_.k, true);
  }
  return run_row("dfa", config_.enabled_kinds, config_.poly_mode, config_.k,
                 false);
}

ExperimentReport ExperimentRunner::run_ablation_suite() {
  ExperimentReport report = make_report();
  report.systems.push_back(run_system(SystemKind::kBaseline));
  report.systems.push_back(run_system(SystemKind::kDfa));

  auto without = [&](CsuKind kind) {
    std::set<CsuKind> kinds = config_.enabled_kinds;
    kinds.erase(kind);
    return kinds;
  };
  report.systems.push_back(run_row("-poly", without(CsuKind::kPolysemous),
                                   config_.poly_mode, config_.k, false));
  report.systems.push_back(run_row("-domain",
                                   without(CsuKind::kDomainSpecific),
                                   config_.poly_mode, config_.k, false));
  report.systems.push_back(run_row("-culture", without(CsuKind::kCultural),
                                   config_.poly_mode, config_.k, false));

  if (config_.poly_mode == PolyMode::kFiltered && !config_.lexicon_path.empty()) {
    report.systems.push_back(run_row("+simple-poly", config_.enabled_kinds,
                                     PolyMode::kSimple, config_.k, false));
  }
  return report;
}

std::vector<KSweepPoint> ExperimentRunner::run_k_sweep(
    const std::vector<std::size_t>& ks) {
  std::vector<KSweepPoint> points;
  for (std::size_t k : ks) {
    if (k == 0) throw ContractError("k_sweep: k must be positive");
    std::string label = k == std::numeric_limits<std::size_t>::max()
                            ? "inf"
                            : std::to_string(k);
    SystemResult row = run_row("dfa@k=" + label, config_.enabled_kinds,
                               config_.poly_mode, k, false);
    KSweepPoint point;
    point.k = k;
    point.unlimited = k == std::numeric_limits<std::size_t>::max();
    point.metrics = row.metrics;
    point.failure_rate = row.failure_rate;
    points.push_back(point);
  }
  return points;
}

ExperimentReport ExperimentRunner::make_report() const {
  ExperimentReport report;
  report.config_snapshot = experiment_config_to_json(config_, true);
  report.input_digests = input_digests_;
  report.backend_id = client_->backend_id();
  report.metric_sig = metric_signature(config_.target_lang);
  return report;
}

std::string ExperimentRunner::identify_to_jsonl() {
  ensure_identified();
  std::string out;
  for (std::size_t i = 0; i < test_set_.sources.size(); ++i) {
    CsuSet set = assemble_for(identified_sentences_[i], config_.enabled_kinds,
                              config_.poly_mode, config_.k);
    out += csu_set_to_jsonl(test_set_.ids[i], set);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["provenance"] = {
      {"config", nlohmann::ordered_json::parse(report.config_snapshot)},
      {"input_digests", report.input_digests},
      {"backend_id", report.backend_id},
      {"metric_signature", report.metric_sig}};

  auto systems = nlohmann::ordered_json::array();
  for (const auto& system : report.systems) {
    nlohmann::ordered_json s;
    s["name"] = system.name;
    s["metrics"] = metrics_to_json(system.metrics);
    s["failure_rate"] = system.failure_rate;
    s["external_score"] = nullptr;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& record : system.per_sentence) {
      arr.push_back(sentence_to_json(record));
    }
    s["per_sentence"] = arr;
    systems.push_back(s);
  }
  j["systems"] = systems;

  if (!report.k_sweep.empty()) {
    auto sweep = nlohmann::ordered_json::array();
    for (const auto& point : report.k_sweep) {
      sweep.push_back({{"k", point.unlimited ? nlohmann::ordered_json("inf")
                                             : nlohmann::ordered_json(point.k)},
                       {"metrics", metrics_to_json(point.metrics)},
                       {"failure_rate", point.failure_rate}});
    }
    j["k_sweep"] = sweep;
  }
  return j.dump(2) + "\n";
}

namespace {

std::string summary_csv(const ExperimentReport& report) {
  std::string csv = "system,bleu,bleu4,chrf2,failure_rate,external_score\n";
  for (const auto& system : report.systems) {
    csv += system.name + "," + format_fixed(system.metrics.bleu, 4) + "," +
           format_fixed(system.metrics.bleu4, 4) + "," +
           format_fixed(system.metrics.chrf2, 4) + "," +
           format_fixed(system.failure_rate, 4) + ",\n";
  }
  return csv;
}

std::string summary_md(const ExperimentReport& report) {
  std::string md = "# Experiment summary\n\n";
  md += "Backend: " + report.backend_id + "\n\n";
  md += "| System | BLEU | BLEU4 | chrF2 | Failure rate | External score |\n";
  md += "|---|---|---|---|---|---|\n";
  for (const auto& system : report.systems) {
    md += "| " + system.name + " | " + format_fixed(system.metrics.bleu, 2) +
          " | " + format_fixed(system.metrics.bleu4, 2) + " | " +
          format_fixed(system.metrics.chrf2, 2) + " | " +
          format_fixed(system.failure_rate * 100.0, 2) + "% | |\n";
  }
  md += "\nMetric signature: " + report.metric_sig + "\n";
  return md;
}

std::string k_sweep_csv(const ExperimentReport& report) {
  std::string csv = "k,bleu,bleu4,chrf2,failure_rate,external_score\n";
  for (const auto& point : report.k_sweep) {
    csv += (point.unlimited ? std::string("inf") : std::to_string(point.k)) +
           "," + format_fixed(point.metrics.bleu, 4) + "," +
           format_fixed(point.metrics.bleu4, 4) + "," +
           format_fixed(point.metrics.chrf2, 4) + "," +
           format_fixed(point.failure_rate, 4) + ",\n";
  }
  return csv;
}

}  // namespace

void render_report(const ExperimentReport& report,
                   const std::string& output_dir) {
  if (output_dir.empty()) throw Error("render_report: output_dir is empty");
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) {
    throw Error("cannot create output directory " + output_dir + ": " +
                ec.message());
  }

  // Compose everything first so a failure cannot leave a partial file set.
  const std::string json_text = report_to_json(report);
  const std::string csv_text = summary_csv(report);
  const std::string md_text = summary_md(report);

  const fs::path dir(output_dir);
  write_file_atomic(dir / "report.json", json_text);
  write_file_atomic(dir / "summary.csv", csv_text);
  write_file_atomic(dir / "summary.md", md_text);
  if (!report.k_sweep.empty()) {
    write_file_atomic(dir / "k_sweep.csv", k_sweep_csv(report));
  }
}

}  // namespace dfa
