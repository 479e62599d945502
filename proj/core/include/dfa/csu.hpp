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

#ifndef DFA_CSU_HPP_
#define DFA_CSU_HPP_

#include <string>
#include <vector>

namespace dfa {

/// The three kinds of context-sensitive units, in priority order.
enum class CsuKind { kPolysemous, kDomainSpecific, kCultural };

std::string to_string(CsuKind kind);
CsuKind csu_kind_from_string(const std::string& name);

/// One flagged unit. `surface` is the text exactly as it appears in the
/// source sentence; `first_offset` is the codepoint index of its first
/// occurrence there.
struct CsuRecord {
  std::string surface;
  CsuKind kind = CsuKind::kPolysemous;
  std::size_t first_offset = 0;

  bool operator==(const CsuRecord&) const = default;
};

/// The k-capped, ordered collection injected into a prompt. Invariants:
/// records.size() <= k; surfaces pairwise distinct (case-insensitively for
/// alphabetic scripts).
struct CsuSet {
  std::vector<CsuRecord> records;
  std::size_t k = 8;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
};

}  // namespace dfa

#endif  // DFA_CSU_HPP_
