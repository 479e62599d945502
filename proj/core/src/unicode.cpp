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

#include "dfa/unicode.hpp"

#include "dfa/errors.hpp"

namespace dfa {

namespace {

// Decodes one codepoint starting at `pos`. Returns false on malformed input.
bool decode_one(std::string_view s, std::size_t pos, char32_t* cp,
                std::size_t* len) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(s[i]);
  };
  unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    *cp = b0;
    *len = 1;
    return true;
  }
  std::size_t n;
  char32_t value;
  char32_t min_value;
  if ((b0 & 0xE0) == 0xC0) {
    n = 2;
    value = b0 & 0x1F;
    min_value = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    n = 3;
    value = b0 & 0x0F;
    min_value = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    n = 4;
    value = b0 & 0x07;
    min_value = 0x10000;
  } else {
    return false;
  }
  if (pos + n > s.size()) return false;
  for (std::size_t i = 1; i < n; ++i) {
    unsigned char bi = byte(pos + i);
    if ((bi & 0xC0) != 0x80) return false;
    value = (value << 6) | (bi & 0x3F);
  }
  if (value < min_value) return false;                     // overlong
  if (value >= 0xD800 && value <= 0xDFFF) return false;    // surrogate
  if (value > 0x10FFFF) return false;
  *cp = value;
  *len = n;
  return true;
}

}  // namespace

bool utf8_valid(std::string_view text) {
  std::size_t pos = 0;
  char32_t cp;
  std::size_t len;
  while (pos < text.size()) {
    if (!decode_one(text, pos, &cp, &len)) return false;
    pos += len;
  }
  return true;
}

std::vector<Codepoint> utf8_decode(std::string_view text) {
  std::vector<Codepoint> out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp;
    std::size_t len;
    if (!decode_one(text, pos, &cp, &len)) {
      throw FormatError("malformed UTF-8 at byte offset " +
                        std::to_string(pos));
    }
    out.push_back({cp, pos, len});
    pos += len;
  }
  return out;
}

std::string utf8_encode(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::size_t utf8_length(std::string_view text) {
  return utf8_decode(text).size();
}

bool is_cjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) ||    // unified ideographs
         (cp >= 0x3400 && cp <= 0x4DBF) ||    // extension A
         (cp >= 0xF900 && cp <= 0xFAFF) ||    // compatibility ideographs
         (cp >= 0x20000 && cp <= 0x2A6DF);    // extension B
}

bool is_ascii_letter(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}

bool is_latin_letter(char32_t cp) {
  if (is_ascii_letter(cp)) return true;
  if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) return true;
  if (cp >= 0x100 && cp <= 0x24F) return true;  // Latin Extended-A/B
  return false;
}

bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_word_char(char32_t cp) {
  return is_latin_letter(cp) || is_digit(cp) || is_cjk(cp) ||
         (cp >= 0x0370 && cp <= 0x03FF) ||   // Greek
         (cp >= 0x0400 && cp <= 0x04FF) ||   // Cyrillic
         (cp >= 0x3040 && cp <= 0x30FF) ||   // kana
         (cp >= 0xAC00 && cp <= 0xD7AF);     // hangul
}

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0xA0 || cp == 0x3000;
}

char32_t fold_case(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  // Latin-1 Supplement uppercase block, skipping the multiplication sign.
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  // Latin Extended-A stores most case pairs at adjacent codepoints.
  if (cp >= 0x100 && cp <= 0x137 && (cp % 2) == 0) return cp + 1;
  if (cp >= 0x139 && cp <= 0x147 && (cp % 2) == 1) return cp + 1;
  if (cp >= 0x14A && cp <= 0x176 && (cp % 2) == 0) return cp + 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17D && (cp % 2) == 1) return cp + 1;
  return cp;
}

std::string fold_case(std::string_view text) {
  if (!utf8_valid(text)) return std::string(text);
  std::string out;
  out.reserve(text.size());
  for (const Codepoint& c : utf8_decode(text)) {
    out += utf8_encode(fold_case(c.value));
  }
  return out;
}

}  // namespace dfa
