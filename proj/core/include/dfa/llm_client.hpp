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

#ifndef DFA_LLM_CLIENT_HPP_
#define DFA_LLM_CLIENT_HPP_

#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "dfa/prompt.hpp"

namespace dfa {

enum class BackendKind { kHttp, kReplay };

std::string to_string(BackendKind kind);
BackendKind backend_kind_from_string(const std::string& name);

struct DecodeParams {
  std::size_t max_length = 256;
  std::size_t beam_width = 5;
  double temperature = 0.0;
};

struct RetryPolicy {
  std::size_t max_attempts = 3;
  std::size_t backoff_base_ms = 250;
};

/// Adapts the JSON request/response shape to whatever the endpoint expects.
/// `response_text_pointer` is a JSON Pointer into the response body.
struct FieldMapping {
  std::string model_field = "model";
  std::string input_field = "prompt";
  std::string response_text_pointer = "/choices/0/text";
  // Optional JSON object merged into every request body.
  std::string extra_body_json;
};

struct BackendConfig {
  BackendKind kind = BackendKind::kReplay;
  std::string endpoint;       // http kind only
  std::string model_id;
  DecodeParams decode;
  std::string auth;           // opaque credential, sent as a bearer token
  std::size_t concurrency_limit = 4;
  RetryPolicy retry;
  FieldMapping mapping;
  std::string cache_path;     // replay source; appended to in record mode
  bool record = false;        // http kind: append live responses to the cache
};

/// A completed translation request: the raw reply plus its extracted first
/// sentence and request metadata. `extracted` is derived from raw_output by
/// extract_translation().
struct TranslationResult {
  std::string sentence_id;
  std::string prompt_hash;
  std::string raw_output;
  std::string extracted;
  double latency_ms = 0.0;
  std::string backend_id;
};

/// Raw completion returned by the client layer.
struct Completion {
  std::string raw_output;
  std::string prompt_hash;
  double latency_ms = 0.0;
  bool from_cache = false;
};

/// Pluggable HTTP layer so tests can observe and script traffic.
class Transport {
 public:
  struct Response {
    int status = 0;
    std::string body;
  };
  virtual ~Transport() = default;
  /// Throws TransportError for connection-level failures.
  virtual Response post(const std::string& endpoint, const std::string& body,
                        const std::vector<std::pair<std::string, std::string>>&
                            headers) = 0;
};

/// Deterministic record/replay store: JSON Lines, one record
/// {prompt_hash, prompt_text, decode_params, raw_output, timestamp} per line.
/// Concurrent reads; append-only writes; last write wins on identical keys.
class ReplayCache {
 public:
  ReplayCache() = default;
  explicit ReplayCache(std::string path);

  std::optional<std::string> lookup(const std::string& prompt_hash) const;
  void put(const std::string& prompt_hash, const std::string& prompt_text,
           const DecodeParams& decode, const std::string& raw_output);
  std::size_t size() const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::string> entries_;
  std::mutex append_mutex_;
};

/// Translation/elicitation backend. Shareable across threads; live request
/// issuance is serialized up to concurrency_limit. With a fixed replay cache
/// the whole layer is a pure function of (prompt, config).
class LlmClient {
 public:
  explicit LlmClient(BackendConfig config,
                     std::shared_ptr<Transport> transport = nullptr);

  /// Resolves a prompt to its raw completion, per the backend kind.
  Completion complete(const PromptSpec& prompt);

  /// Hex SHA-256 over prompt text plus decode parameters: sweeps with
  /// different decoding never cross-contaminate the cache.
  std::string prompt_hash(const std::string& prompt_text) const;

  const BackendConfig& config() const { return config_; }
  std::string backend_id() const;
  const ReplayCache& cache() const { return cache_; }

 private:
  Completion complete_http(const PromptSpec& prompt, const std::string& hash);
  std::string build_request_body(const std::string& prompt_text) const;

  BackendConfig config_;
  std::shared_ptr<Transport> transport_;
  ReplayCache cache_;

  // Counting gate bounding in-flight live requests.
  std::mutex gate_mutex_;
  std::condition_variable gate_cv_;
  std::size_t gate_available_;
};

/// Canonical string form of decode parameters used for hashing and cache
/// records.
std::string decode_params_canonical(const DecodeParams& decode);

/// Completes a prompt and assembles the full TranslationResult, including
/// first-sentence extraction for the target language.
TranslationResult run_translation(LlmClient& client, const PromptSpec& prompt,
                                  const std::string& target_lang);

/// First-sentence extraction: take the first non-empty line, strip any
/// leading "Translation:"-style label and wrapping quote pairs (repeatedly,
/// so the operation is idempotent), then cut at the first sentence-terminal
/// punctuation of the target language (. ! ? for Latin-script targets;
/// 。！？ for zh), inclusive. No terminator keeps the whole line.
/// All-whitespace input yields "" (flagged downstream, not fatal).
std::string extract_translation(const std::string& raw,
                                const std::string& target_lang);

const std::vector<std::string>& default_refusal_patterns();

/// Task-failure heuristic, used only for reporting: true when `extracted` is
/// empty, repeats the source verbatim, matches a refusal pattern, or contains
/// no characters of the target language's script class.
bool detect_task_failure(const std::string& extracted, const std::string& source,
                         const std::string& target_lang,
                         const std::vector<std::string>& refusal_patterns =
                             default_refusal_patterns());

}  // namespace dfa

#endif  // DFA_LLM_CLIENT_HPP_
