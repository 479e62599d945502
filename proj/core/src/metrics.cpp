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

#include "dfa/metrics.hpp"

#include <cmath>
#include <unordered_map>

#include "dfa/errors.hpp"
#include "dfa/unicode.hpp"

namespace dfa {

namespace {

bool is_zh(const std::string& lang) {
  std::string folded = fold_case(lang);
  return folded == "zh" || folded.rfind("zh-", 0) == 0;
}

bool is_punct(char32_t cp) { return !is_word_char(cp) && !is_space(cp); }

void check_corpus(const Corpus& corpus) {
  if (corpus.hypotheses.size() != corpus.references.size()) {
    throw ContractError("corpus hypothesis/reference count mismatch: " +
                        std::to_string(corpus.hypotheses.size()) + " vs " +
                        std::to_string(corpus.references.size()));
  }
  if (corpus.hypotheses.empty()) {
    throw ContractError("corpus is empty");
  }
}

using Counts = std::unordered_map<std::string, std::size_t>;

Counts ngram_counts(const std::vector<std::string>& tokens, std::size_t n) {
  Counts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) key.push_back('\x1f');
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

std::size_t clipped_matches(const Counts& hyp, const Counts& ref) {
  std::size_t matches = 0;
  for (const auto& [gram, count] : hyp) {
    auto it = ref.find(gram);
    if (it != ref.end()) matches += std::min(count, it->second);
  }
  return matches;
}

struct BleuStats {
  std::vector<std::size_t> match;
  std::vector<std::size_t> total;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

BleuStats segment_stats(const std::vector<std::string>& hyp_tokens,
                        const std::vector<std::string>& ref_tokens,
                        std::size_t max_n) {
  BleuStats stats;
  stats.match.assign(max_n, 0);
  stats.total.assign(max_n, 0);
  stats.hyp_len = hyp_tokens.size();
  stats.ref_len = ref_tokens.size();
  for (std::size_t n = 1; n <= max_n; ++n) {
    Counts hyp = ngram_counts(hyp_tokens, n);
    Counts ref = ngram_counts(ref_tokens, n);
    stats.match[n - 1] = clipped_matches(hyp, ref);
    stats.total[n - 1] =
        hyp_tokens.size() >= n ? hyp_tokens.size() - n + 1 : 0;
  }
  return stats;
}

double brevity_penalty(std::size_t hyp_len, std::size_t ref_len) {
  if (hyp_len >= ref_len) return 1.0;
  if (hyp_len == 0) return 0.0;
  return std::exp(1.0 - static_cast<double>(ref_len) /
                            static_cast<double>(hyp_len));
}

}  // namespace

std::vector<std::string> tokenize_for_bleu(const std::string& text,
                                           const std::string& lang) {
  std::vector<std::string> tokens;
  auto cps = utf8_decode(text);
  const bool zh = is_zh(lang);

  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (const Codepoint& cp : cps) {
    if (is_space(cp.value)) {
      flush();
    } else if (zh && is_cjk(cp.value)) {
      flush();
      tokens.push_back(utf8_encode(cp.value));
    } else if (is_punct(cp.value)) {
      flush();
      tokens.push_back(utf8_encode(cp.value));
    } else {
      current += utf8_encode(cp.value);
    }
  }
  flush();
  return tokens;
}

MetricReport bleu(const Corpus& corpus, std::size_t max_n) {
  check_corpus(corpus);
  MetricReport report;
  report.segment_count = corpus.hypotheses.size();

  std::vector<std::size_t> match(max_n, 0), total(max_n, 0);
  std::size_t hyp_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < corpus.hypotheses.size(); ++i) {
    BleuStats stats =
        segment_stats(tokenize_for_bleu(corpus.hypotheses[i], corpus.language),
                      tokenize_for_bleu(corpus.references[i], corpus.language),
                      max_n);
    for (std::size_t n = 0; n < max_n; ++n) {
      match[n] += stats.match[n];
      total[n] += stats.total[n];
    }
    hyp_len += stats.hyp_len;
    ref_len += stats.ref_len;
  }

  if (hyp_len == 0) {
    report.empty_hypotheses = true;
    report.bleu = 0.0;
    report.brevity_penalty = 0.0;
    return report;
  }

  // Orders with no hypothesis n-grams corpus-wide (every segment shorter
  // than n) are skipped, so identity corpora score 100 at any length.
  double smooth = 1.0;
  double log_sum = 0.0;
  std::size_t effective = 0;
  for (std::size_t n = 0; n < max_n; ++n) {
    if (total[n] == 0) break;
    ++effective;
    double p;
    if (match[n] == 0) {
      smooth *= 2.0;
      p = 1.0 / (smooth * static_cast<double>(total[n]));
    } else {
      p = static_cast<double>(match[n]) / static_cast<double>(total[n]);
    }
    if (n < report.per_ngram_precisions.size()) {
      report.per_ngram_precisions[n] = p * 100.0;
    }
    log_sum += std::log(p);
  }
  report.brevity_penalty = brevity_penalty(hyp_len, ref_len);
  report.bleu = effective == 0
                    ? 0.0
                    : report.brevity_penalty *
                          std::exp(log_sum / static_cast<double>(effective)) *
                          100.0;
  return report;
}

double bleu4(const Corpus& corpus, std::size_t max_n) {
  check_corpus(corpus);
  double sum = 0.0;
  for (std::size_t i = 0; i < corpus.hypotheses.size(); ++i) {
    auto hyp_tokens = tokenize_for_bleu(corpus.hypotheses[i], corpus.language);
    auto ref_tokens = tokenize_for_bleu(corpus.references[i], corpus.language);
    if (hyp_tokens.empty()) continue;  // segment scores 0
    BleuStats stats = segment_stats(hyp_tokens, ref_tokens, max_n);
    // Effective order: short hypotheses are scored over the orders they have.
    std::size_t effective = std::min(max_n, hyp_tokens.size());
    double smooth = 1.0;
    double log_sum = 0.0;
    for (std::size_t n = 0; n < effective; ++n) {
      double p;
      if (stats.match[n] == 0) {
        smooth *= 2.0;
        p = 1.0 / (smooth * static_cast<double>(stats.total[n]));
      } else {
        p = static_cast<double>(stats.match[n]) /
            static_cast<double>(stats.total[n]);
      }
      log_sum += std::log(p);
    }
    sum += brevity_penalty(stats.hyp_len, stats.ref_len) *
           std::exp(log_sum / static_cast<double>(effective)) * 100.0;
  }
  return sum / static_cast<double>(corpus.hypotheses.size());
}

double chrf2(const Corpus& corpus) {
  check_corpus(corpus);
  constexpr std::size_t kOrder = 6;
  constexpr double kBetaSq = 4.0;  // beta = 2, recall weighted 4x

  std::vector<std::size_t> match(kOrder, 0), hyp_total(kOrder, 0),
      ref_total(kOrder, 0);

  auto strip_ws = [](const std::string& text) {
    std::vector<std::string> chars;
    for (const Codepoint& cp : utf8_decode(text)) {
      if (!is_space(cp.value)) chars.push_back(utf8_encode(cp.value));
    }
    return chars;
  };

  for (std::size_t i = 0; i < corpus.hypotheses.size(); ++i) {
    auto hyp_chars = strip_ws(corpus.hypotheses[i]);
    auto ref_chars = strip_ws(corpus.references[i]);
    for (std::size_t n = 1; n <= kOrder; ++n) {
      Counts hyp = ngram_counts(hyp_chars, n);
      Counts ref = ngram_counts(ref_chars, n);
      match[n - 1] += clipped_matches(hyp, ref);
      hyp_total[n - 1] += hyp_chars.size() >= n ? hyp_chars.size() - n + 1 : 0;
      ref_total[n - 1] += ref_chars.size() >= n ? ref_chars.size() - n + 1 : 0;
    }
  }

  double f_sum = 0.0;
  std::size_t effective_orders = 0;
  for (std::size_t n = 0; n < kOrder; ++n) {
    if (hyp_total[n] == 0 || ref_total[n] == 0) continue;
    ++effective_orders;
    if (match[n] == 0) continue;  // F contribution is exactly 0
    double precision =
        static_cast<double>(match[n]) / static_cast<double>(hyp_total[n]);
    double recall =
        static_cast<double>(match[n]) / static_cast<double>(ref_total[n]);
    f_sum += (1.0 + kBetaSq) * precision * recall /
             (kBetaSq * precision + recall);
  }
  if (effective_orders == 0) return 0.0;
  return 100.0 * f_sum / static_cast<double>(effective_orders);
}

MetricReport score_corpus(const Corpus& corpus) {
  MetricReport report = bleu(corpus);
  report.bleu4 = bleu4(corpus);
  report.chrf2 = chrf2(corpus);
  return report;
}

std::string metric_signature(const std::string& lang) {
  std::string tokenizer = is_zh(lang) ? "zh-char" : "13a-style";
  return "bleu|tok:" + tokenizer +
         "|smooth:exp|case:mixed|order:4 + bleu4|segment-level|effective-order"
         " + chrf2|order:6|beta:2|whitespace:stripped";
}

}  // namespace dfa
