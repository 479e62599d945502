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

#include "dfa/prompt.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dfa/errors.hpp"

namespace dfa {

namespace {

constexpr const char* kSentencePlaceholder = "{sentence}";

const char* kElicitationQuestion =
    "Please identify domain-specific terms and culturally unique vocabulary "
    "from the following sentences:";

std::string default_elicitation_template() {
  return std::string(kElicitationQuestion) + " " + kSentencePlaceholder;
}

std::string normalize_lang(const std::string& lang) {
  std::string out;
  out.reserve(lang.size());
  for (char c : lang) {
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
  }
  return out;
}

}  // namespace

const std::string& elicitation_reply_format_instruction() {
  static const std::string kInstruction =
      "Answer on one line in exactly this format: "
      "domain: term1, term2; cultural: term1, term2. "
      "Use the exact wording from the sentence and write (none) for an empty "
      "list.";
  return kInstruction;
}

std::vector<PromptTemplateSet> all_builtin_templates() {
  return {
      {"en", "zh", "提供这句话的中文翻译:", "请保证下列词语的准确翻译:",
       default_elicitation_template()},
      {"zh", "en", "提供这句话的英文翻译:", "请保证下列词语的准确翻译:",
       default_elicitation_template()},
      {"en", "de", "Provide the German translation for this sentence:",
       "Ensure that the following words are accurately translated:",
       default_elicitation_template()},
      {"de", "en", "Provide the English translation for this sentence:",
       "Ensure that the following words are accurately translated:",
       default_elicitation_template()},
  };
}

PromptTemplateSet builtin_templates(const std::string& source_lang,
                                    const std::string& target_lang) {
  std::string src = normalize_lang(source_lang);
  std::string tgt = normalize_lang(target_lang);
  for (auto& set : all_builtin_templates()) {
    if (set.source_lang == src && set.target_lang == tgt) return set;
  }
  throw Error("no built-in prompt templates for pair " + src + "-" + tgt);
}

std::string templates_to_json(const std::vector<PromptTemplateSet>& sets) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& set : sets) {
    arr.push_back({
        {"pair", set.source_lang + "-" + set.target_lang},
        {"base_instruction", set.base_instruction},
        {"focus_header", set.focus_header},
        {"elicitation_template", set.elicitation_template},
    });
  }
  return arr.dump(2) + "\n";
}

std::vector<PromptTemplateSet> templates_from_json(
    const std::string& json_text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad template JSON: ") + e.what());
  }
  if (!parsed.is_array()) {
    throw FormatError("template config must be a JSON array");
  }
  std::vector<PromptTemplateSet> sets;
  for (const auto& item : parsed) {
    std::string pair = item.at("pair").get<std::string>();
    auto dash = pair.find('-');
    if (dash == std::string::npos) {
      throw FormatError("template pair must look like 'en-zh', got: " + pair);
    }
    PromptTemplateSet set;
    set.source_lang = normalize_lang(pair.substr(0, dash));
    set.target_lang = normalize_lang(pair.substr(dash + 1));
    set.base_instruction = item.at("base_instruction").get<std::string>();
    set.focus_header = item.at("focus_header").get<std::string>();
    set.elicitation_template =
        item.value("elicitation_template", default_elicitation_template());
    sets.push_back(std::move(set));
  }
  return sets;
}

PromptTemplateSet load_templates_for_pair(const std::string& path,
                                          const std::string& source_lang,
                                          const std::string& target_lang) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open template config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string src = normalize_lang(source_lang);
  std::string tgt = normalize_lang(target_lang);
  for (auto& set : templates_from_json(buf.str())) {
    if (set.source_lang == src && set.target_lang == tgt) return set;
  }
  return builtin_templates(src, tgt);
}

PromptSpec build_base_prompt(const std::string& sentence,
                             const PromptTemplateSet& templates,
                             const std::string& sentence_id) {
  if (sentence.empty()) {
    throw ContractError("build_base_prompt: sentence is empty");
  }
  PromptSpec spec;
  spec.sentence_id = sentence_id;
  spec.text = templates.base_instruction + " " + sentence;
  return spec;
}

PromptSpec build_enhanced_prompt(const std::string& sentence,
                                 const CsuSet& csus,
                                 const PromptTemplateSet& templates,
                                 const std::string& sentence_id) {
  PromptSpec spec = build_base_prompt(sentence, templates, sentence_id);
  if (csus.empty()) return spec;

  std::string joined;
  for (const auto& record : csus.records) {
    if (sentence.find(record.surface) == std::string::npos) {
      throw ContractError("CSU surface '" + record.surface +
                          "' does not occur in sentence: " + sentence);
    }
    if (!joined.empty()) joined += ", ";
    joined += record.surface;
    spec.csu_surfaces.push_back(record.surface);
  }
  spec.text += " " + templates.focus_header + " " + joined;
  return spec;
}

PromptSpec build_elicitation_prompt(const std::string& sentence,
                                    const PromptTemplateSet& templates,
                                    const std::string& sentence_id) {
  if (sentence.empty()) {
    throw ContractError("build_elicitation_prompt: sentence is empty");
  }
  PromptSpec spec;
  spec.sentence_id = sentence_id;

  std::string text = templates.elicitation_template;
  auto pos = text.find(kSentencePlaceholder);
  if (pos != std::string::npos) {
    // Exactly one substitution; a placeholder literal inside the sentence
    // itself is never expanded.
    text.replace(pos, std::char_traits<char>::length(kSentencePlaceholder),
                 sentence);
  } else {
    text += " " + sentence;
  }
  spec.text = text + " " + elicitation_reply_format_instruction();
  return spec;
}

}  // namespace dfa
