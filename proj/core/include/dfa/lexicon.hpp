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

#ifndef DFA_LEXICON_HPP_
#define DFA_LEXICON_HPP_

#include <iosfwd>
#include <map>
#include <set>
#include <string>

namespace dfa {

struct LexiconEntry {
  std::string source_word;
  std::string target_word;
};

/// Bilingual dictionary: source word -> set of distinct target translations.
///
/// Built once by parse_lexicon() and immutable afterwards; safe to share
/// across threads. Entries mirror the source file verbatim (case-sensitive,
/// no normalization).
struct TranslationMap {
  std::map<std::string, std::set<std::string>> entries;
  std::string source_lang;
  std::string target_lang;
  // Lines whose field count was not exactly 2, skipped at parse time.
  std::size_t skipped_lines = 0;

  bool operator==(const TranslationMap& other) const {
    return source_lang == other.source_lang &&
           target_lang == other.target_lang && entries == other.entries;
  }
};

/// Parses a MUSE-format lexicon: UTF-8 text, one "source<ws>target" pair per
/// line, space or tab separated, LF or CRLF endings. Lines with a field count
/// other than 2 are skipped and counted. Duplicated pairs collapse (set
/// semantics). Empty input yields an empty map.
/// Throws FormatError if the input is not valid UTF-8.
TranslationMap parse_lexicon(std::istream& input, const std::string& source_lang,
                             const std::string& target_lang);

/// Convenience overload over an in-memory buffer.
TranslationMap parse_lexicon_text(std::string_view text,
                                  const std::string& source_lang,
                                  const std::string& target_lang);

/// Reads and parses a lexicon file. Throws Error if the file cannot be read.
TranslationMap load_lexicon_file(const std::string& path,
                                 const std::string& source_lang,
                                 const std::string& target_lang);

/// The multi-translation candidate set: every source word with at least two
/// distinct target translations. Deterministic for a given map.
std::set<std::string> multi_translation_set(const TranslationMap& map);

/// Serializes a map back to lexicon lines ("source target\n", sorted).
/// Re-parsing the output yields an equal map.
std::string serialize_lexicon(const TranslationMap& map);

}  // namespace dfa

#endif  // DFA_LEXICON_HPP_
