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

#ifndef DFA_EMBEDDINGS_HPP_
#define DFA_EMBEDDINGS_HPP_

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace dfa {

/// Static word vectors for one language. Immutable after load; safe for
/// shared read access from multiple threads.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<float>> vectors;
  std::string language;
  // Words dropped at load time because their vector was all zeros.
  std::size_t dropped_zero_vectors = 0;

  bool contains(const std::string& word) const {
    return vectors.find(word) != vectors.end();
  }
  const std::vector<float>* find(const std::string& word) const {
    auto it = vectors.find(word);
    return it == vectors.end() ? nullptr : &it->second;
  }
};

/// Loads fastText text-format vectors: header line "count dim", then one
/// "word v1 ... v_dim" line per word. When vocab_filter is given, only words
/// in the filter are kept (full embedding files are multi-GB; the semantic
/// filter only needs vectors for translation words).
///
/// Errors (FormatError): missing/unparsable header; a body line whose vector
/// length differs from dim (the message names the offending word); a
/// non-finite component. Zero vectors are dropped and counted, not fatal.
EmbeddingTable load_embeddings(
    std::istream& input,
    const std::optional<std::set<std::string>>& vocab_filter = std::nullopt,
    const std::string& language = "");

EmbeddingTable load_embeddings_file(
    const std::string& path,
    const std::optional<std::set<std::string>>& vocab_filter = std::nullopt,
    const std::string& language = "");

/// u.v / (|u||v|), clamped to [-1, 1] against floating rounding.
/// Throws std::invalid_argument on length mismatch and std::domain_error on
/// a zero vector (callers must exclude zero vectors).
double cosine_similarity(std::span<const float> u, std::span<const float> v);

/// 1 - cosine_similarity, the distance the semantic filter clusters under.
double cosine_distance(std::span<const float> u, std::span<const float> v);

}  // namespace dfa

#endif  // DFA_EMBEDDINGS_HPP_
