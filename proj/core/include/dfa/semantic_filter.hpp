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

#ifndef DFA_SEMANTIC_FILTER_HPP_
#define DFA_SEMANTIC_FILTER_HPP_

#include <set>
#include <string>
#include <vector>

#include "dfa/embeddings.hpp"
#include "dfa/lexicon.hpp"

namespace dfa {

enum class Linkage { kAverage, kComplete };

std::string to_string(Linkage linkage);
Linkage linkage_from_string(const std::string& name);

struct ClusterParams {
  // Cosine distance (1 - cosine similarity); merging stops once the closest
  // pair of clusters is farther apart than this.
  double distance_threshold = 0.5;
  Linkage linkage = Linkage::kAverage;
  // A word cannot be judged polysemous from fewer embedded translations.
  std::size_t min_embedded_translations = 2;
};

struct ClusterResult {
  // Partition of the embedded translations. Each cluster is sorted; clusters
  // are ordered by their lexicographically smallest word.
  std::vector<std::vector<std::string>> clusters;
  // Translation words absent from the embedding table, never clustered.
  std::set<std::string> dropped_oov;
};

/// Agglomerative clustering of a word's translations under cosine distance.
/// Merging stops when the minimum inter-cluster distance exceeds
/// params.distance_threshold. Deterministic: distance ties are broken by the
/// lexicographic order of each cluster's smallest word. An empty embedded set
/// yields zero clusters with every word in dropped_oov.
ClusterResult cluster_translations(const std::set<std::string>& translations,
                                   const EmbeddingTable& table,
                                   const ClusterParams& params);

/// True iff the word's translations split into >= 2 semantic clusters (and at
/// least params.min_embedded_translations of them are embedded). A single
/// cluster means the translations share one sense and the word needs no
/// special handling.
bool is_semantically_polysemous(const std::string& source_word,
                                const std::set<std::string>& translations,
                                const EmbeddingTable& table,
                                const ClusterParams& params);

struct PolyFilterResult {
  std::set<std::string> words;          // the filtered polysemous CSU set
  std::size_t candidates = 0;           // |multi-translation set| going in
  std::size_t oov_dropped = 0;          // translations missing an embedding
  ClusterParams params;

  std::size_t filtered() const { return words.size(); }
};

/// Runs the semantic filter over every multi-translation candidate in the
/// map. Per-word jobs are independent; `jobs` > 1 fans them out across worker
/// threads with a deterministic merge.
PolyFilterResult build_polysemous_csu_set(const TranslationMap& map,
                                          const EmbeddingTable& table,
                                          const ClusterParams& params,
                                          std::size_t jobs = 1);

/// Writes the word set (one per line, sorted) to `path` and a JSON stats
/// sidecar {candidates, filtered, oov_dropped, params} to `path` + ".stats.json".
void write_csu_set_file(const PolyFilterResult& result, const std::string& path);

/// Reads a CSU set file written by write_csu_set_file (or any one-word-per-line
/// UTF-8 file).
std::set<std::string> read_csu_set_file(const std::string& path);

}  // namespace dfa

#endif  // DFA_SEMANTIC_FILTER_HPP_
