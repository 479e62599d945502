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

#ifndef DFA_CSU_IDENTIFY_HPP_
#define DFA_CSU_IDENTIFY_HPP_

#include <set>
#include <string>
#include <vector>

#include "dfa/csu.hpp"
#include "dfa/prompt.hpp"

namespace dfa {

class LlmClient;

/// True for languages matched by substring search instead of tokens (zh).
bool uses_substring_matching(const std::string& lang);

struct Token {
  std::string text;          // punctuation-stripped surface
  std::size_t cp_offset;     // codepoint index of the first kept character
  std::size_t byte_begin;    // byte range of the kept characters
  std::size_t byte_end;
};

struct TokenizedSentence {
  std::vector<Token> tokens;
  bool substring_mode = false;
};

/// Space-delimited languages: split on whitespace, strip leading/trailing
/// punctuation, keep original offsets. zh: no tokenization; token list is
/// empty and substring_mode is set.
TokenizedSentence tokenize_source(const std::string& sentence,
                                  const std::string& lang);

/// Matches the filtered polysemous set against a sentence.
/// en/de: a token matches iff it case-insensitively equals a set entry.
/// zh: entries match as contiguous substrings, longer entries claiming
/// characters first (greedy longest-match, left to right, no overlaps).
/// One record per distinct entry, at its first occurrence, ordered by offset.
std::vector<CsuRecord> match_polysemous(const std::string& sentence,
                                        const std::string& lang,
                                        const std::set<std::string>& poly_set);

struct ElicitedCandidate {
  std::string surface;
  CsuKind kind;

  bool operator==(const ElicitedCandidate&) const = default;
};

struct ElicitationResult {
  std::vector<ElicitedCandidate> candidates;
  // Non-empty when the reply did not follow the expected grammar; the
  // candidate list is then empty rather than guessed at.
  std::string diagnostic;
  std::string raw_reply;
};

/// Parses an elicitation reply into labeled candidates. The grammar accepts
/// "domain: a, b; cultural: c" plus line-separated and comma-separated
/// variants; list placeholders like "(none)" are dropped. Anything without a
/// recognizable labeled list yields an empty candidate list and a diagnostic.
ElicitationResult parse_elicitation_reply(const std::string& reply);

/// Sends the elicitation prompt for a sentence and parses the reply.
/// Transport errors are rethrown with the sentence id attached.
ElicitationResult elicit_internal_csus(const std::string& sentence,
                                       LlmClient& llm,
                                       const PromptTemplateSet& templates,
                                       const std::string& sentence_id = "");

/// Source-sentence matching filter: keeps a candidate iff its surface occurs
/// in the sentence (token/phrase equality for space-delimited languages,
/// substring for zh). Retained records carry the sentence's own casing and
/// the offset of the first occurrence.
std::vector<CsuRecord> filter_in_sentence(
    const std::vector<ElicitedCandidate>& candidates,
    const std::string& sentence, const std::string& lang);

/// Merges the per-kind record lists into the final k-capped set:
/// deduplicates by surface (case-insensitive for alphabetic scripts) with
/// kind priority polysemous > domain > cultural, orders by (kind priority,
/// first offset), truncates to k. Deterministic.
CsuSet assemble_csu_set(const std::vector<CsuRecord>& poly,
                        const std::vector<CsuRecord>& dom,
                        const std::vector<CsuRecord>& cul, std::size_t k,
                        const std::string& lang);

/// One JSON Lines record: {"sentence_id": ..., "csus": [{surface, kind,
/// offset}], "k": ...}.
std::string csu_set_to_jsonl(const std::string& sentence_id, const CsuSet& set);

}  // namespace dfa

#endif  // DFA_CSU_IDENTIFY_HPP_
