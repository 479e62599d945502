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

#ifndef DFA_METRICS_HPP_
#define DFA_METRICS_HPP_

#include <array>
#include <string>
#include <vector>

namespace dfa {

/// Parallel hypothesis/reference segments, one reference per segment.
struct Corpus {
  std::vector<std::string> hypotheses;
  std::vector<std::string> references;
  std::string language;
};

struct MetricReport {
  double bleu = 0.0;
  double bleu4 = 0.0;   // sentence-level 4-gram BLEU averaged over segments
  double chrf2 = 0.0;
  std::array<double, 4> per_ngram_precisions{};  // percentages
  double brevity_penalty = 1.0;
  std::size_t segment_count = 0;
  // Set when the hypothesis side was empty corpus-wide.
  bool empty_hypotheses = false;
};

/// zh: each CJK character becomes its own token; non-CJK runs split on
/// whitespace with punctuation split off. Other languages: 13a-style,
/// whitespace-delimited with each punctuation character its own token.
std::vector<std::string> tokenize_for_bleu(const std::string& text,
                                           const std::string& lang);

/// Corpus-level BLEU: modified n-gram precisions p_1..p_4 clipped against
/// reference counts; BP = 1 if hyp length >= ref length else exp(1-ref/hyp);
/// score = BP * exp(mean ln p_n) * 100. Zero-count precisions use
/// exponential smoothing: the j-th zero order gets 1/(2^j * hyp_ngram_count).
/// Orders with no hypothesis n-grams corpus-wide are skipped (so identity
/// scores 100 for corpora of any length).
/// Throws ContractError when hypothesis/reference counts differ or are zero.
MetricReport bleu(const Corpus& corpus, std::size_t max_n = 4);

/// Sentence-level BLEU with effective n-gram order and the same exponential
/// smoothing, averaged over segments.
double bleu4(const Corpus& corpus, std::size_t max_n = 4);

/// chrF with beta = 2: character n-grams of order 1..6 over
/// whitespace-stripped text, statistics summed over the corpus, F2
/// macro-averaged over orders where both sides have n-grams.
double chrf2(const Corpus& corpus);

/// Fills every metric field of a report for the corpus.
MetricReport score_corpus(const Corpus& corpus);

/// Human-readable description of the metric configuration (tokenizer,
/// smoothing, case handling), attached to every emitted score.
std::string metric_signature(const std::string& lang);

}  // namespace dfa

#endif  // DFA_METRICS_HPP_
