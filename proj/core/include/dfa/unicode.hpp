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

#ifndef DFA_UNICODE_HPP_
#define DFA_UNICODE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dfa {

// Minimal UTF-8 / codepoint utilities. Strict decoding: overlong forms,
// surrogates and codepoints past U+10FFFF are rejected.

struct Codepoint {
  char32_t value;
  std::size_t byte_offset;  // offset of the first byte in the source string
  std::size_t byte_length;
};

/// True iff `text` is well-formed UTF-8.
bool utf8_valid(std::string_view text);

/// Decodes `text` into codepoints with byte positions.
/// Throws FormatError on malformed UTF-8.
std::vector<Codepoint> utf8_decode(std::string_view text);

/// Encodes a single codepoint as UTF-8.
std::string utf8_encode(char32_t cp);

/// Number of codepoints in well-formed UTF-8 text.
std::size_t utf8_length(std::string_view text);

bool is_cjk(char32_t cp);
bool is_latin_letter(char32_t cp);
bool is_ascii_letter(char32_t cp);
bool is_digit(char32_t cp);
/// Letters (Latin, Greek, Cyrillic, CJK, kana, hangul) and ASCII digits.
bool is_word_char(char32_t cp);
bool is_space(char32_t cp);

/// Lowercases ASCII plus Latin-1 Supplement and Latin Extended-A letters.
/// Other codepoints pass through unchanged.
char32_t fold_case(char32_t cp);

/// Case-folds a UTF-8 string with fold_case(). Invalid input is returned
/// unchanged (folding is only used on already-validated text).
std::string fold_case(std::string_view text);

}  // namespace dfa

#endif  // DFA_UNICODE_HPP_
