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

#include "dfa/csu_identify.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dfa/errors.hpp"
#include "dfa/llm_client.hpp"
#include "dfa/unicode.hpp"

namespace dfa {

std::string to_string(CsuKind kind) {
  switch (kind) {
    case CsuKind::kPolysemous: return "polysemous";
    case CsuKind::kDomainSpecific: return "domain";
    case CsuKind::kCultural: return "cultural";
  }
  return "polysemous";
}

CsuKind csu_kind_from_string(const std::string& name) {
  if (name == "polysemous" || name == "poly") return CsuKind::kPolysemous;
  if (name == "domain" || name == "domain-specific")
    return CsuKind::kDomainSpecific;
  if (name == "cultural" || name == "culture") return CsuKind::kCultural;
  throw FormatError("unknown CSU kind: " + name);
}

bool uses_substring_matching(const std::string& lang) {
  std::string folded = fold_case(lang);
  return folded == "zh" || folded.rfind("zh-", 0) == 0;
}

namespace {

bool is_strippable_punct(char32_t cp) {
  return !is_word_char(cp) && !is_space(cp);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_wrapping_quotes(std::string s) {
  static const std::vector<std::pair<std::string, std::string>> kQuotePairs = {
      {"\"", "\""}, {"'", "'"},  {"“", "”"},
      {"‘", "’"}, {"「", "」"},
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [open, close] : kQuotePairs) {
      if (s.size() >= open.size() + close.size() &&
          s.compare(0, open.size(), open) == 0 &&
          s.compare(s.size() - close.size(), close.size(), close) == 0) {
        s = s.substr(open.size(), s.size() - open.size() - close.size());
        changed = true;
      }
    }
  }
  return s;
}

bool is_list_placeholder(const std::string& item) {
  static const std::unordered_set<std::string> kPlaceholders = {
      "(none)", "none", "n/a", "na", "-", "(empty)", "null", "no", "无", "（无）"};
  return kPlaceholders.count(fold_case(item)) > 0;
}

}  // namespace

TokenizedSentence tokenize_source(const std::string& sentence,
                                  const std::string& lang) {
  TokenizedSentence result;
  if (uses_substring_matching(lang)) {
    result.substring_mode = true;
    return result;
  }
  auto cps = utf8_decode(sentence);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i].value)) ++i;
    std::size_t run_begin = i;
    while (i < cps.size() && !is_space(cps[i].value)) ++i;
    if (run_begin == i) continue;
    // Strip leading/trailing punctuation inside the run.
    std::size_t b = run_begin, e = i;
    while (b < e && is_strippable_punct(cps[b].value)) ++b;
    while (e > b && is_strippable_punct(cps[e - 1].value)) --e;
    if (b == e) continue;
    Token tok;
    tok.cp_offset = b;
    tok.byte_begin = cps[b].byte_offset;
    tok.byte_end = cps[e - 1].byte_offset + cps[e - 1].byte_length;
    tok.text = sentence.substr(tok.byte_begin, tok.byte_end - tok.byte_begin);
    result.tokens.push_back(std::move(tok));
  }
  return result;
}

std::vector<CsuRecord> match_polysemous(const std::string& sentence,
                                        const std::string& lang,
                                        const std::set<std::string>& poly_set) {
  std::vector<CsuRecord> records;
  if (poly_set.empty() || sentence.empty()) return records;

  if (!uses_substring_matching(lang)) {
    std::unordered_set<std::string> folded_set;
    for (const auto& entry : poly_set) folded_set.insert(fold_case(entry));
    std::unordered_set<std::string> seen;
    for (const Token& tok : tokenize_source(sentence, lang).tokens) {
      std::string key = fold_case(tok.text);
      if (folded_set.count(key) && seen.insert(key).second) {
        records.push_back({tok.text, CsuKind::kPolysemous, tok.cp_offset});
      }
    }
    return records;
  }

  // zh: greedy longest-match, left to right, no overlaps.
  auto cps = utf8_decode(sentence);
  std::map<std::size_t, std::unordered_set<std::string>, std::greater<>>
      by_length;
  for (const auto& entry : poly_set) {
    std::size_t len = utf8_length(entry);
    if (len > 0) by_length[len].insert(entry);
  }
  std::unordered_set<std::string> seen;
  std::size_t i = 0;
  while (i < cps.size()) {
    bool matched = false;
    for (const auto& [len, entries] : by_length) {
      if (i + len > cps.size()) continue;
      std::size_t byte_b = cps[i].byte_offset;
      std::size_t byte_e = cps[i + len - 1].byte_offset + cps[i + len - 1].byte_length;
      std::string candidate = sentence.substr(byte_b, byte_e - byte_b);
      if (entries.count(candidate)) {
        if (seen.insert(candidate).second) {
          records.push_back({candidate, CsuKind::kPolysemous, i});
        }
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return records;
}

ElicitationResult parse_elicitation_reply(const std::string& reply) {
  ElicitationResult result;
  result.raw_reply = reply;
  if (!utf8_valid(reply)) {
    result.diagnostic = "reply is not valid UTF-8";
    return result;
  }

  // Segments are separated by ';' or newlines; a labeled segment is
  // "<label>: item, item". Labels mentioning "domain" or "cultur" select the
  // kind; other segments are ignored.
  std::vector<std::string> segments;
  std::string current;
  for (char c : reply) {
    if (c == ';' || c == '\n') {
      segments.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  segments.push_back(current);

  bool saw_label = false;
  for (const auto& segment : segments) {
    auto colon = segment.find(':');
    if (colon == std::string::npos) continue;
    std::string label = fold_case(trim(segment.substr(0, colon)));
    CsuKind kind;
    if (label.find("domain") != std::string::npos) {
      kind = CsuKind::kDomainSpecific;
    } else if (label.find("cultur") != std::string::npos) {
      kind = CsuKind::kCultural;
    } else {
      continue;
    }
    saw_label = true;
    std::string items = segment.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= items.size()) {
      std::size_t comma = items.find(',', pos);
      std::string item = (comma == std::string::npos)
                             ? items.substr(pos)
                             : items.substr(pos, comma - pos);
      item = strip_wrapping_quotes(trim(item));
      if (!item.empty() && !is_list_placeholder(item)) {
        result.candidates.push_back({item, kind});
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }

  if (!saw_label) {
    result.diagnostic = "no labeled domain/cultural list found in reply";
  }
  return result;
}

ElicitationResult elicit_internal_csus(const std::string& sentence,
                                       LlmClient& llm,
                                       const PromptTemplateSet& templates,
                                       const std::string& sentence_id) {
  PromptSpec prompt = build_elicitation_prompt(sentence, templates, sentence_id);
  std::string reply;
  try {
    reply = llm.complete(prompt).raw_output;
  } catch (const TransportError& e) {
    throw TransportError("elicitation failed for sentence '" + sentence_id +
                             "': " + e.what(),
                         e.status(), e.retryable());
  }
  return parse_elicitation_reply(reply);
}

std::vector<CsuRecord> filter_in_sentence(
    const std::vector<ElicitedCandidate>& candidates,
    const std::string& sentence, const std::string& lang) {
  std::vector<CsuRecord> records;
  if (sentence.empty()) return records;

  if (uses_substring_matching(lang)) {
    auto cps = utf8_decode(sentence);
    std::unordered_map<std::size_t, std::size_t> byte_to_cp;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      byte_to_cp[cps[i].byte_offset] = i;
    }
    for (const auto& cand : candidates) {
      if (cand.surface.empty()) continue;
      auto pos = sentence.find(cand.surface);
      if (pos == std::string::npos) continue;
      auto it = byte_to_cp.find(pos);
      if (it == byte_to_cp.end()) continue;  // match not on a char boundary
      records.push_back({cand.surface, cand.kind, it->second});
    }
    return records;
  }

  TokenizedSentence tokenized = tokenize_source(sentence, lang);
  const auto& tokens = tokenized.tokens;
  for (const auto& cand : candidates) {
    auto cand_tokens = tokenize_source(cand.surface, lang).tokens;
    if (cand_tokens.empty() || cand_tokens.size() > tokens.size()) continue;
    for (std::size_t start = 0;
         start + cand_tokens.size() <= tokens.size(); ++start) {
      bool all_equal = true;
      for (std::size_t j = 0; j < cand_tokens.size(); ++j) {
        if (fold_case(tokens[start + j].text) !=
            fold_case(cand_tokens[j].text)) {
          all_equal = false;
          break;
        }
      }
      if (!all_equal) continue;
      const Token& first = tokens[start];
      const Token& last = tokens[start + cand_tokens.size() - 1];
      // The record keeps the sentence's own casing and spacing.
      std::string surface =
          sentence.substr(first.byte_begin, last.byte_end - first.byte_begin);
      records.push_back({surface, cand.kind, first.cp_offset});
      break;
    }
  }
  return records;
}

CsuSet assemble_csu_set(const std::vector<CsuRecord>& poly,
                        const std::vector<CsuRecord>& dom,
                        const std::vector<CsuRecord>& cul, std::size_t k,
                        const std::string& lang) {
  if (k == 0) throw ContractError("assemble_csu_set: k must be positive");

  const bool fold = !uses_substring_matching(lang);
  auto key_of = [&](const CsuRecord& r) {
    return fold ? fold_case(r.surface) : r.surface;
  };

  CsuSet set;
  set.k = k;
  std::unordered_set<std::string> seen;
  for (const auto* group : {&poly, &dom, &cul}) {
    std::vector<CsuRecord> sorted = *group;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const CsuRecord& a, const CsuRecord& b) {
                       return a.first_offset < b.first_offset;
                     });
    for (const auto& record : sorted) {
      if (record.surface.empty()) continue;
      if (!seen.insert(key_of(record)).second) continue;
      if (set.records.size() < k) set.records.push_back(record);
    }
  }
  return set;
}

std::string csu_set_to_jsonl(const std::string& sentence_id,
                             const CsuSet& set) {
  nlohmann::ordered_json line;
  line["sentence_id"] = sentence_id;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& record : set.records) {
    arr.push_back({{"surface", record.surface},
                   {"kind", to_string(record.kind)},
                   {"offset", record.first_offset}});
  }
  line["csus"] = arr;
  line["k"] = set.k;
  return line.dump();
}

}  // namespace dfa
