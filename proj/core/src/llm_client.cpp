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

#include "dfa/llm_client.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dfa/digest.hpp"
#include "dfa/errors.hpp"
#include "dfa/unicode.hpp"

namespace dfa {

std::string to_string(BackendKind kind) {
  return kind == BackendKind::kHttp ? "http" : "replay";
}

BackendKind backend_kind_from_string(const std::string& name) {
  if (name == "http") return BackendKind::kHttp;
  if (name == "replay") return BackendKind::kReplay;
  throw FormatError("unknown backend kind: " + name);
}

std::string decode_params_canonical(const DecodeParams& decode) {
  char temp[64];
  std::snprintf(temp, sizeof(temp), "%.17g", decode.temperature);
  return "max_length=" + std::to_string(decode.max_length) +
         ";beam_width=" + std::to_string(decode.beam_width) +
         ";temperature=" + temp;
}

// ---------------------------------------------------------------------------
// ReplayCache

ReplayCache::ReplayCache(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // a missing cache file is an empty cache
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
      entries_[record.at("prompt_hash").get<std::string>()] =
          record.at("raw_output").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad replay cache record at " + path_ + ":" +
                        std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::optional<std::string> ReplayCache::lookup(
    const std::string& prompt_hash) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(prompt_hash);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ReplayCache::put(const std::string& prompt_hash,
                      const std::string& prompt_text,
                      const DecodeParams& decode,
                      const std::string& raw_output) {
  {
    std::unique_lock lock(mutex_);
    entries_[prompt_hash] = raw_output;
  }
  if (path_.empty()) return;
  nlohmann::ordered_json record;
  record["prompt_hash"] = prompt_hash;
  record["prompt_text"] = prompt_text;
  record["decode_params"] = {{"max_length", decode.max_length},
                             {"beam_width", decode.beam_width},
                             {"temperature", decode.temperature}};
  record["raw_output"] = raw_output;
  record["timestamp"] = static_cast<long long>(std::time(nullptr));
  std::lock_guard lock(append_mutex_);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to replay cache: " + path_);
  out << record.dump() << '\n';
}

std::size_t ReplayCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

// ---------------------------------------------------------------------------
// Transport

namespace {

class HttplibTransport : public Transport {
 public:
  Response post(const std::string& endpoint, const std::string& body,
                const std::vector<std::pair<std::string, std::string>>& headers)
      override {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
      throw TransportError("endpoint is not a URL: " + endpoint, 0, false);
    }
    auto path_begin = endpoint.find('/', scheme_end + 3);
    std::string base = (path_begin == std::string::npos)
                           ? endpoint
                           : endpoint.substr(0, path_begin);
    std::string path =
        (path_begin == std::string::npos) ? "/" : endpoint.substr(path_begin);

    httplib::Client client(base);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    httplib::Headers hdrs;
    for (const auto& [k, v] : headers) hdrs.emplace(k, v);
    auto result = client.Post(path, hdrs, body, "application/json");
    if (!result) {
      throw TransportError(
          "transport failure: " + httplib::to_string(result.error()), 0, true);
    }
    return {result->status, result->body};
  }
};

class GatePass {
 public:
  GatePass(std::mutex& m, std::condition_variable& cv, std::size_t& available)
      : mutex_(m), cv_(cv), available_(available) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return available_ > 0; });
    --available_;
  }
  ~GatePass() {
    {
      std::lock_guard lock(mutex_);
      ++available_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex& mutex_;
  std::condition_variable& cv_;
  std::size_t& available_;
};

}  // namespace

// ---------------------------------------------------------------------------
// LlmClient

LlmClient::LlmClient(BackendConfig config, std::shared_ptr<Transport> transport)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      cache_(config_.cache_path),
      gate_available_(config_.concurrency_limit == 0
                          ? 1
                          : config_.concurrency_limit) {
  if (config_.kind == BackendKind::kHttp && !transport_) {
    transport_ = std::make_shared<HttplibTransport>();
  }
}

std::string LlmClient::prompt_hash(const std::string& prompt_text) const {
  return sha256_hex(prompt_text + '\0' + decode_params_canonical(config_.decode));
}

std::string LlmClient::backend_id() const {
  return config_.model_id + "@" + to_string(config_.kind);
}

std::string LlmClient::build_request_body(const std::string& prompt_text) const {
  nlohmann::ordered_json body;
  body[config_.mapping.model_field] = config_.model_id;
  body[config_.mapping.input_field] = prompt_text;
  // Decode settings ride along for backends that honor them; hosted
  // chat-style endpoints without beam support run at the configured
  // temperature instead.
  body["max_length"] = config_.decode.max_length;
  body["beam_width"] = config_.decode.beam_width;
  body["temperature"] = config_.decode.temperature;
  if (!config_.mapping.extra_body_json.empty()) {
    nlohmann::json extra;
    try {
      extra = nlohmann::json::parse(config_.mapping.extra_body_json);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("bad extra_body_json in field mapping: ") +
                        e.what());
    }
    for (auto& [key, value] : extra.items()) body[key] = value;
  }
  return body.dump();
}

Completion LlmClient::complete(const PromptSpec& prompt) {
  const std::string hash = prompt_hash(prompt.text);

  if (config_.kind == BackendKind::kReplay) {
    auto cached = cache_.lookup(hash);
    if (!cached) {
      throw CacheMissError("replay cache miss for prompt hash " + hash, hash);
    }
    return {*cached, hash, 0.0, true};
  }

  // Record mode: identical prompts make one live call.
  if (config_.record) {
    auto cached = cache_.lookup(hash);
    if (cached) return {*cached, hash, 0.0, true};
  }
  return complete_http(prompt, hash);
}

Completion LlmClient::complete_http(const PromptSpec& prompt,
                                    const std::string& hash) {
  const std::string body = build_request_body(prompt.text);
  std::vector<std::pair<std::string, std::string>> headers;
  if (!config_.auth.empty()) {
    headers.emplace_back("Authorization", "Bearer " + config_.auth);
  }

  const std::size_t attempts = std::max<std::size_t>(1, config_.retry.max_attempts);
  std::string last_error;
  auto start = std::chrono::steady_clock::now();
  for (std::size_t attempt = 1; attempt <= attempts; ++attempt) {
    Transport::Response response;
    try {
      GatePass pass(gate_mutex_, gate_cv_, gate_available_);
      response = transport_->post(config_.endpoint, body, headers);
    } catch (const TransportError& e) {
      if (!e.retryable() || attempt == attempts) throw;
      last_error = e.what();
      std::this_thread::sleep_for(std::chrono::milliseconds(
          config_.retry.backoff_base_ms << (attempt - 1)));
      continue;
    }

    if (response.status >= 200 && response.status < 300) {
      std::string text;
      try {
        nlohmann::json parsed = nlohmann::json::parse(response.body);
        text = parsed
                   .at(nlohmann::json::json_pointer(
                       config_.mapping.response_text_pointer))
                   .get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw TransportError(
            std::string("malformed completion response: ") + e.what(),
            response.status, false);
      }
      double latency_ms =
          std::chrono::duration<double, std::milli>(
              std::chrono::steady_clock::now() - start)
              .count();
      if (config_.record) {
        cache_.put(hash, prompt.text, config_.decode, text);
      }
      return {text, hash, latency_ms, false};
    }

    if (response.status >= 400 && response.status < 500) {
      throw TransportError("backend rejected request with HTTP " +
                               std::to_string(response.status) + ": " +
                               response.body,
                           response.status, false);
    }

    last_error = "HTTP " + std::to_string(response.status);
    if (attempt == attempts) {
      throw TransportError("backend failed after " + std::to_string(attempts) +
                               " attempts, last error: " + last_error,
                           response.status, true);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(
        config_.retry.backoff_base_ms << (attempt - 1)));
  }
  throw TransportError("backend failed: " + last_error, 0, true);
}

TranslationResult run_translation(LlmClient& client, const PromptSpec& prompt,
                                  const std::string& target_lang) {
  Completion completion = client.complete(prompt);
  TranslationResult result;
  result.sentence_id = prompt.sentence_id;
  result.prompt_hash = completion.prompt_hash;
  result.raw_output = completion.raw_output;
  result.extracted = extract_translation(completion.raw_output, target_lang);
  result.latency_ms = completion.latency_ms;
  result.backend_id = client.backend_id();
  return result;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

std::string trim_ws(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// A "Translation:"-style label: everything before the first colon, when that
// prefix is short, made of letters/spaces only, and mentions a known label
// word.
bool strip_label(std::string* line) {
  static const std::vector<std::string> kLabelWords = {
      "translation", "übersetzung", "译文", "翻译"};
  static const std::vector<std::string> kExactLabels = {"answer", "output"};

  std::size_t colon = std::string::npos;
  std::size_t colon_len = 1;
  for (std::size_t i = 0; i < line->size(); ++i) {
    if ((*line)[i] == ':') {
      colon = i;
      break;
    }
    if (i + 3 <= line->size() && line->compare(i, 3, "：") == 0) {
      colon = i;
      colon_len = 3;
      break;
    }
  }
  if (colon == std::string::npos || colon > 48) return false;

  std::string prefix = trim_ws(line->substr(0, colon));
  if (prefix.empty() || !utf8_valid(prefix)) return false;
  prefix = fold_case(prefix);
  for (const Codepoint& cp : utf8_decode(prefix)) {
    if (!is_word_char(cp.value) && !is_space(cp.value)) return false;
  }
  bool is_label = false;
  for (const auto& word : kLabelWords) {
    if (prefix.find(word) != std::string::npos) {
      is_label = true;
      break;
    }
  }
  for (const auto& exact : kExactLabels) {
    if (prefix == exact) is_label = true;
  }
  if (!is_label) return false;
  *line = trim_ws(line->substr(colon + colon_len));
  return true;
}

bool strip_quote_pair(std::string* line) {
  static const std::vector<std::pair<std::string, std::string>> kQuotePairs = {
      {"\"", "\""},     {"'", "'"},       {"“", "”"},
      {"‘", "’"}, {"「", "」"}, {"«", "»"},
  };
  for (const auto& [open, close] : kQuotePairs) {
    if (line->size() > open.size() + close.size() &&
        line->compare(0, open.size(), open) == 0 &&
        line->compare(line->size() - close.size(), close.size(), close) == 0) {
      *line = trim_ws(
          line->substr(open.size(), line->size() - open.size() - close.size()));
      return true;
    }
  }
  return false;
}

bool is_zh_lang(const std::string& lang) {
  std::string folded = fold_case(lang);
  return folded == "zh" || folded.rfind("zh-", 0) == 0;
}

}  // namespace

std::string extract_translation(const std::string& raw,
                                const std::string& target_lang) {
  // First non-empty line.
  std::string line;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    std::size_t eol = raw.find('\n', pos);
    std::string candidate = (eol == std::string::npos)
                                ? raw.substr(pos)
                                : raw.substr(pos, eol - pos);
    candidate = trim_ws(candidate);
    if (!candidate.empty()) {
      line = candidate;
      break;
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  if (line.empty()) return "";

  // Strip labels and quote pairs to a fixpoint so extraction is idempotent.
  bool changed = true;
  while (changed) {
    changed = strip_label(&line);
    changed = strip_quote_pair(&line) || changed;
  }

  // Cut at the first sentence terminator of the target language, inclusive.
  if (is_zh_lang(target_lang)) {
    static const std::vector<std::string> kZhTerminators = {"。", "！",
                                                            "？"};
    std::size_t best = std::string::npos;
    std::size_t best_len = 0;
    for (const auto& term : kZhTerminators) {
      auto at = line.find(term);
      if (at != std::string::npos && (best == std::string::npos || at < best)) {
        best = at;
        best_len = term.size();
      }
    }
    if (best != std::string::npos) line = line.substr(0, best + best_len);
  } else {
    auto at = line.find_first_of(".!?");
    if (at != std::string::npos) line = line.substr(0, at + 1);
  }
  return trim_ws(line);
}

const std::vector<std::string>& default_refusal_patterns() {
  static const std::vector<std::string> kPatterns = {
      "i'm sorry",     "i am sorry",   "not able to",  "unable to",
      "cannot provide", "can't provide", "i cannot",    "as an ai",
  };
  return kPatterns;
}

bool detect_task_failure(const std::string& extracted,
                         const std::string& source,
                         const std::string& target_lang,
                         const std::vector<std::string>& refusal_patterns) {
  std::string text = trim_ws(extracted);
  if (text.empty()) return true;
  if (text == trim_ws(source)) return true;

  std::string folded = fold_case(text);
  for (const auto& pattern : refusal_patterns) {
    if (folded.find(pattern) != std::string::npos) return true;
  }

  // Mangled bytes cannot carry target-script characters.
  if (!utf8_valid(text)) return true;

  bool has_target_script = false;
  const bool zh = is_zh_lang(target_lang);
  for (const Codepoint& cp : utf8_decode(text)) {
    if (zh ? is_cjk(cp.value) : is_latin_letter(cp.value)) {
      has_target_script = true;
      break;
    }
  }
  return !has_target_script;
}

}  // namespace dfa
