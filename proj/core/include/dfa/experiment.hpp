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

#ifndef DFA_EXPERIMENT_HPP_
#define DFA_EXPERIMENT_HPP_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dfa/csu_identify.hpp"
#include "dfa/errors.hpp"
#include "dfa/llm_client.hpp"
#include "dfa/metrics.hpp"
#include "dfa/semantic_filter.hpp"

namespace dfa {

enum class PolyMode { kOff, kSimple, kFiltered };

std::string to_string(PolyMode mode);
PolyMode poly_mode_from_string(const std::string& name);

enum class SystemKind { kBaseline, kDfa };

struct ExperimentConfig {
  std::string source_lang;
  std::string target_lang;
  std::string source_path;
  std::string reference_path;
  std::string lexicon_path;      // optional
  std::string embeddings_path;   // optional
  std::size_t k = 8;
  std::set<CsuKind> enabled_kinds = {CsuKind::kPolysemous,
                                     CsuKind::kDomainSpecific,
                                     CsuKind::kCultural};
  PolyMode poly_mode = PolyMode::kFiltered;
  ClusterParams cluster_params;
  BackendConfig backend;
  std::string templates_path;    // optional; empty = built-ins for the pair
  std::string output_dir;
  long seed = 0;
  std::size_t jobs = 1;          // semantic-filter fanout

  /// Enforces the poly_mode/resource invariants. Throws ContractError.
  void validate() const;
};

/// Loads a JSON config file mirroring ExperimentConfig. The environment
/// variable DFA_BACKEND_AUTH, when set, overrides backend.auth (the one
/// permitted environment override).
ExperimentConfig load_experiment_config(const std::string& path);

/// Serializes a config back to its JSON form. Credentials are redacted when
/// `redact_auth` is set (used for provenance snapshots).
std::string experiment_config_to_json(const ExperimentConfig& config,
                                      bool redact_auth = false);

struct ParallelTestSet {
  std::vector<std::string> sources;
  std::vector<std::string> references;
  std::vector<std::string> ids;  // 0-based line numbers as strings
};

/// Reads a parallel test set, one segment per line, UTF-8. Line counts must
/// match (hard error naming both counts); a trailing newline is ignored
/// symmetrically on both sides.
ParallelTestSet load_parallel_testset(const std::string& source_path,
                                      const std::string& reference_path);

struct SentenceRecord {
  std::string id;
  std::string source;
  std::string reference;
  std::string prompt;
  std::vector<CsuRecord> csus;
  std::string raw;
  std::string extracted;
  bool failed = false;
};

struct SystemResult {
  std::string name;
  MetricReport metrics;
  double failure_rate = 0.0;
  std::vector<SentenceRecord> per_sentence;
};

struct KSweepPoint {
  std::size_t k = 0;
  bool unlimited = false;
  MetricReport metrics;
  double failure_rate = 0.0;
};

struct ExperimentReport {
  std::vector<SystemResult> systems;
  std::vector<KSweepPoint> k_sweep;
  std::string config_snapshot;  // resolved config JSON, credentials redacted
  std::map<std::string, std::string> input_digests;
  std::string backend_id;
  std::string metric_sig;
};

/// Thrown when a backend error aborts a run; completed per-sentence records
/// are carried along (and persisted by the caller where possible).
class RunAborted : public Error {
 public:
  RunAborted(const std::string& what, SystemResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const SystemResult& partial() const { return partial_; }

 private:
  SystemResult partial_;
};

/// Shared context for the run_* entry points: test set, lexicon-driven CSU
/// sets, templates, one backend client, and a single elicitation pass reused
/// across systems (the cache makes re-eliciting equivalent under replay, so
/// the cheaper single pass is used everywhere).
class ExperimentRunner {
 public:
  explicit ExperimentRunner(ExperimentConfig config,
                            std::shared_ptr<Transport> transport = nullptr);

  /// Runs one system over the test set.
  SystemResult run_system(SystemKind kind);

  /// Runs {baseline, dfa, -poly, -domain, -culture} and, when the config has
  /// filtered polysemy available, {+simple-poly}.
  ExperimentReport run_ablation_suite();

  /// Runs the dfa system once per k over the same identification results.
  /// Pass std::numeric_limits<std::size_t>::max() for "no cap".
  std::vector<KSweepPoint> run_k_sweep(const std::vector<std::size_t>& ks);

  /// Report skeleton with provenance filled in (systems appended by callers).
  ExperimentReport make_report() const;

  /// Per-sentence CSU identification results as JSON Lines (the `identify`
  /// interface).
  std::string identify_to_jsonl();

  const ParallelTestSet& test_set() const { return test_set_; }
  const ExperimentConfig& config() const { return config_; }
  LlmClient& client() { return *client_; }
  const PolyFilterResult* poly_filter_stats() const {
    return poly_filter_ ? &*poly_filter_ : nullptr;
  }

 private:
  struct IdentifiedSentence {
    std::vector<CsuRecord> poly_filtered;
    std::vector<CsuRecord> poly_simple;
    std::vector<CsuRecord> domain;
    std::vector<CsuRecord> cultural;
  };

  void ensure_identified();
  SystemResult run_row(const std::string& name,
                       const std::set<CsuKind>& kinds, PolyMode poly_source,
                       std::size_t k_cap, bool base_prompt_only);
  CsuSet assemble_for(const IdentifiedSentence& ident,
                      const std::set<CsuKind>& kinds, PolyMode poly_source,
                      std::size_t k_cap) const;

  ExperimentConfig config_;
  ParallelTestSet test_set_;
  PromptTemplateSet templates_;
  std::unique_ptr<LlmClient> client_;
  std::set<std::string> simple_poly_set_;
  std::set<std::string> filtered_poly_set_;
  std::optional<PolyFilterResult> poly_filter_;
  bool identified_ = false;
  std::vector<IdentifiedSentence> identified_sentences_;
  std::map<std::string, std::string> input_digests_;
};

/// Writes report.json, summary.csv, summary.md and (when the report carries
/// sweep points) k_sweep.csv into output_dir. All writes are atomic
/// (temp file + rename); an unwritable output_dir fails before any partial
/// write. Re-rendering the same report is byte-identical.
void render_report(const ExperimentReport& report,
                   const std::string& output_dir);

/// JSON form of the full report (the report.json payload).
std::string report_to_json(const ExperimentReport& report);

}  // namespace dfa

#endif  // DFA_EXPERIMENT_HPP_
