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

#include "dfa/semantic_filter.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "dfa/errors.hpp"
#include "dfa/unicode.hpp"

namespace dfa {

std::string to_string(Linkage linkage) {
  return linkage == Linkage::kAverage ? "average" : "complete";
}

Linkage linkage_from_string(const std::string& name) {
  if (name == "average") return Linkage::kAverage;
  if (name == "complete") return Linkage::kComplete;
  throw FormatError("unknown linkage: " + name +
                    " (expected 'average' or 'complete')");
}

namespace {

// Linkage distance between two clusters given the word-pair distance matrix.
double cluster_distance(const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b,
                        const std::vector<std::vector<double>>& dist,
                        Linkage linkage) {
  if (linkage == Linkage::kComplete) {
    double worst = 0.0;
    for (std::size_t i : a)
      for (std::size_t j : b) worst = std::max(worst, dist[i][j]);
    return worst;
  }
  double sum = 0.0;
  for (std::size_t i : a)
    for (std::size_t j : b) sum += dist[i][j];
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace

ClusterResult cluster_translations(const std::set<std::string>& translations,
                                   const EmbeddingTable& table,
                                   const ClusterParams& params) {
  if (params.distance_threshold <= 0.0 || params.distance_threshold > 2.0) {
    throw ContractError("distance_threshold must lie in (0, 2], got " +
                        std::to_string(params.distance_threshold));
  }
  ClusterResult result;

  // std::set iteration is lexicographic, which fixes word indices and makes
  // every later tie-break deterministic.
  std::vector<std::string> words;
  for (const auto& w : translations) {
    if (table.contains(w)) {
      words.push_back(w);
    } else {
      result.dropped_oov.insert(w);
    }
  }
  const std::size_t n = words.size();
  if (n == 0) return result;

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = cosine_distance(*table.find(words[i]), *table.find(words[j]));
      dist[i][j] = d;
      dist[j][i] = d;
    }
  }

  // Clusters hold sorted word indices; the first index identifies the
  // cluster's smallest word since `words` is sorted.
  std::vector<std::vector<std::size_t>> clusters;
  clusters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});

  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_a = 0, best_b = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double d = cluster_distance(clusters[a], clusters[b], dist,
                                    params.linkage);
        // Strict < keeps the earliest pair in (smallest-word, smallest-word)
        // order on ties: clusters stay sorted by their first index.
        if (d < best) {
          best = d;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best > params.distance_threshold) break;

    auto& merged = clusters[best_a];
    merged.insert(merged.end(), clusters[best_b].begin(),
                  clusters[best_b].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin() +
                   static_cast<std::ptrdiff_t>(best_b));
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
  }

  for (const auto& cluster : clusters) {
    std::vector<std::string> member_words;
    member_words.reserve(cluster.size());
    for (std::size_t i : cluster) member_words.push_back(words[i]);
    result.clusters.push_back(std::move(member_words));
  }
  return result;
}

bool is_semantically_polysemous(const std::string& /*source_word*/,
                                const std::set<std::string>& translations,
                                const EmbeddingTable& table,
                                const ClusterParams& params) {
  ClusterResult clusters = cluster_translations(translations, table, params);
  std::size_t embedded = 0;
  for (const auto& cluster : clusters.clusters) embedded += cluster.size();
  if (embedded < params.min_embedded_translations) return false;
  return clusters.clusters.size() >= 2;
}

PolyFilterResult build_polysemous_csu_set(const TranslationMap& map,
                                          const EmbeddingTable& table,
                                          const ClusterParams& params,
                                          std::size_t jobs) {
  PolyFilterResult result;
  result.params = params;

  std::vector<const std::string*> candidates;
  for (const auto& [source, targets] : map.entries) {
    if (targets.size() >= 2) candidates.push_back(&source);
  }
  result.candidates = candidates.size();

  std::vector<char> keep(candidates.size(), 0);
  std::vector<std::size_t> oov(candidates.size(), 0);

  auto process = [&](std::size_t idx) {
    const std::string& word = *candidates[idx];
    const auto& translations = map.entries.at(word);
    ClusterResult clusters = cluster_translations(translations, table, params);
    oov[idx] = clusters.dropped_oov.size();
    std::size_t embedded = 0;
    for (const auto& c : clusters.clusters) embedded += c.size();
    keep[idx] = (embedded >= params.min_embedded_translations &&
                 clusters.clusters.size() >= 2)
                    ? 1
                    : 0;
  };

  if (jobs <= 1 || candidates.size() < 2) {
    for (std::size_t i = 0; i < candidates.size(); ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    std::size_t worker_count = std::min(jobs, candidates.size());
    workers.reserve(worker_count);
    for (std::size_t w = 0; w < worker_count; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < candidates.size();
             i = next.fetch_add(1)) {
          process(i);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  // Deterministic merge: candidates came out of an ordered map.
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    result.oov_dropped += oov[i];
    if (keep[i]) result.words.insert(*candidates[i]);
  }
  return result;
}

void write_csu_set_file(const PolyFilterResult& result,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write CSU set file: " + path);
  for (const auto& word : result.words) out << word << '\n';
  out.close();

  nlohmann::ordered_json stats;
  stats["candidates"] = result.candidates;
  stats["filtered"] = result.filtered();
  stats["oov_dropped"] = result.oov_dropped;
  stats["params"] = {
      {"distance_threshold", result.params.distance_threshold},
      {"linkage", to_string(result.params.linkage)},
      {"min_embedded_translations", result.params.min_embedded_translations},
  };
  std::ofstream stats_out(path + ".stats.json", std::ios::binary);
  if (!stats_out) throw Error("cannot write stats sidecar for: " + path);
  stats_out << stats.dump(2) << '\n';
}

std::set<std::string> read_csu_set_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open CSU set file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

}  // namespace dfa
