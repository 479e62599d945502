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

#ifndef DFA_PROMPT_HPP_
#define DFA_PROMPT_HPP_

#include <string>
#include <vector>

#include "dfa/csu.hpp"

namespace dfa {

/// Prompt text templates for one translation direction. Base and focus
/// strings for the four built-in pairs (en-zh, zh-en, en-de, de-en) are
/// byte-frozen; new pairs are plain data loaded from a config file.
struct PromptTemplateSet {
  std::string source_lang;
  std::string target_lang;
  std::string base_instruction;
  std::string focus_header;
  // Contains the literal "{sentence}" placeholder, substituted exactly once.
  std::string elicitation_template;
};

/// A fully rendered prompt. `csu_surfaces` lists the anchored surfaces in
/// order; it is empty for base and elicitation prompts. The text only ever
/// carries CSU surfaces, never their candidate translations.
struct PromptSpec {
  std::string text;
  std::string sentence_id;
  std::vector<std::string> csu_surfaces;
};

/// The four built-in template sets. Throws Error for any other pair.
PromptTemplateSet builtin_templates(const std::string& source_lang,
                                    const std::string& target_lang);

/// All four built-in sets, for dumping and inspection.
std::vector<PromptTemplateSet> all_builtin_templates();

/// Serializes template sets as a JSON array with keys
/// {pair, base_instruction, focus_header, elicitation_template}.
std::string templates_to_json(const std::vector<PromptTemplateSet>& sets);

/// Loads template sets from the JSON format emitted by templates_to_json.
std::vector<PromptTemplateSet> templates_from_json(const std::string& json_text);

/// Loads a template config file and picks the set for the given pair,
/// falling back to the built-ins when the file does not define it.
PromptTemplateSet load_templates_for_pair(const std::string& path,
                                          const std::string& source_lang,
                                          const std::string& target_lang);

/// base_instruction + " " + sentence. Throws ContractError on empty sentence.
PromptSpec build_base_prompt(const std::string& sentence,
                             const PromptTemplateSet& templates,
                             const std::string& sentence_id = "");

/// base + " " + sentence + " " + focus_header + " " + surfaces joined ", ".
/// An empty CsuSet yields exactly the base prompt. Throws ContractError if a
/// surface does not occur in the sentence (an upstream bug).
PromptSpec build_enhanced_prompt(const std::string& sentence, const CsuSet& csus,
                                 const PromptTemplateSet& templates,
                                 const std::string& sentence_id = "");

/// Elicitation prompt: the template with the sentence substituted for the
/// first "{sentence}" placeholder, plus the fixed reply-format instruction
/// the reply parser understands.
PromptSpec build_elicitation_prompt(const std::string& sentence,
                                    const PromptTemplateSet& templates,
                                    const std::string& sentence_id = "");

/// The reply-format contract appended to every elicitation prompt.
const std::string& elicitation_reply_format_instruction();

}  // namespace dfa

#endif  // DFA_PROMPT_HPP_
