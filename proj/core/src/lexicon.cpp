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

#include "dfa/lexicon.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include "dfa/errors.hpp"
#include "dfa/unicode.hpp"

namespace dfa {

namespace {

// Splits a line on runs of spaces/tabs. MUSE distributions use either.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace

TranslationMap parse_lexicon_text(std::string_view text,
                                  const std::string& source_lang,
                                  const std::string& target_lang) {
  if (!utf8_valid(text)) {
    throw FormatError("lexicon input is not valid UTF-8");
  }
  TranslationMap map;
  map.source_lang = source_lang;
  map.target_lang = target_lang;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!line.empty()) {
      auto fields = split_fields(line);
      if (fields.size() == 2) {
        map.entries[std::string(fields[0])].insert(std::string(fields[1]));
      } else {
        ++map.skipped_lines;
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return map;
}

TranslationMap parse_lexicon(std::istream& input, const std::string& source_lang,
                             const std::string& target_lang) {
  std::ostringstream buf;
  buf << input.rdbuf();
  return parse_lexicon_text(buf.str(), source_lang, target_lang);
}

TranslationMap load_lexicon_file(const std::string& path,
                                 const std::string& source_lang,
                                 const std::string& target_lang) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon file: " + path);
  return parse_lexicon(in, source_lang, target_lang);
}

std::set<std::string> multi_translation_set(const TranslationMap& map) {
  std::set<std::string> result;
  for (const auto& [source, targets] : map.entries) {
    if (targets.size() >= 2) result.insert(source);
  }
  return result;
}

std::string serialize_lexicon(const TranslationMap& map) {
  std::string out;
  for (const auto& [source, targets] : map.entries) {
    for (const auto& target : targets) {
      out += source;
      out += ' ';
      out += target;
      out += '\n';
    }
  }
  return out;
}

}  // namespace dfa
