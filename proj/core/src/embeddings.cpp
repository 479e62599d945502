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

#include "dfa/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>

#include "dfa/errors.hpp"

namespace dfa {

namespace {

bool parse_float(std::string_view field, float* out) {
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   *out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

bool parse_size(std::string_view field, std::size_t* out) {
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   *out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
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

EmbeddingTable load_embeddings(
    std::istream& input, const std::optional<std::set<std::string>>& vocab_filter,
    const std::string& language) {
  std::string line;
  if (!std::getline(input, line)) {
    throw FormatError("embedding input is empty, expected 'count dim' header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_ws(line);
  std::size_t declared_count = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_size(header[0], &declared_count) ||
      !parse_size(header[1], &dim) || dim == 0) {
    throw FormatError("bad embedding header, expected 'count dim', got: " +
                      line);
  }

  EmbeddingTable table;
  table.dim = dim;
  table.language = language;
  table.vectors.reserve(vocab_filter ? vocab_filter->size() : declared_count);

  std::vector<float> vec(dim);
  while (std::getline(input, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    std::string word(fields[0]);
    if (fields.size() != dim + 1) {
      throw FormatError("embedding vector for word '" + word + "' has " +
                        std::to_string(fields.size() - 1) +
                        " components, expected " + std::to_string(dim));
    }
    if (vocab_filter && vocab_filter->find(word) == vocab_filter->end()) {
      continue;
    }
    bool all_zero = true;
    for (std::size_t i = 0; i < dim; ++i) {
      if (!parse_float(fields[i + 1], &vec[i]) || !std::isfinite(vec[i])) {
        throw FormatError("non-numeric or non-finite component for word '" +
                          word + "'");
      }
      if (vec[i] != 0.0f) all_zero = false;
    }
    if (all_zero) {
      // A zero vector has no direction and would poison cosine similarity.
      ++table.dropped_zero_vectors;
      continue;
    }
    table.vectors[word] = vec;
  }
  return table;
}

EmbeddingTable load_embeddings_file(
    const std::string& path, const std::optional<std::set<std::string>>& vocab_filter,
    const std::string& language) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embeddings file: " + path);
  return load_embeddings(in, vocab_filter, language);
}

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("cosine_similarity: length mismatch " +
                                std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()));
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<double>(u[i]) * v[i];
    nu += static_cast<double>(u[i]) * u[i];
    nv += static_cast<double>(v[i]) * v[i];
  }
  if (nu == 0.0 || nv == 0.0) {
    throw std::domain_error("cosine_similarity: zero vector");
  }
  double sim = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(sim, -1.0, 1.0);
}

double cosine_distance(std::span<const float> u, std::span<const float> v) {
  return 1.0 - cosine_similarity(u, v);
}

}  // namespace dfa
