#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "dfa/semantic_filter.hpp"
#include "test_support.hpp"

using namespace dfa;

namespace {

EmbeddingTable table_of(
    std::vector<std::pair<std::string, std::vector<float>>> rows) {
  EmbeddingTable table;
  table.dim = rows.empty() ? 0 : rows.front().second.size();
  for (auto& [word, vec] : rows) table.vectors[word] = vec;
  return table;
}

std::set<std::string> words(std::initializer_list<std::string> list) {
  return std::set<std::string>(list);
}

}  // namespace

TEST_CASE("identical vectors merge into one cluster") {
  auto table = table_of({{"a", {1, 0}}, {"b", {1, 0}}});
  auto result = cluster_translations(words({"a", "b"}), table, {});
  REQUIRE(result.clusters.size() == 1);
  CHECK(result.clusters[0] == std::vector<std::string>{"a", "b"});
}

TEST_CASE("two tight groups at right angles form two clusters") {
  // Pairwise cosine distances: a-b ~ 0.0098, c-d ~ 0.0098, a-c = 1.0.
  auto table = table_of({{"a", {1.0f, 0.0f}},
                         {"b", {0.99f, 0.14f}},
                         {"c", {0.0f, 1.0f}},
                         {"d", {0.14f, 0.99f}}});
  ClusterParams params;
  params.distance_threshold = 0.5;
  params.linkage = Linkage::kAverage;
  auto result = cluster_translations(words({"a", "b", "c", "d"}), table, params);
  REQUIRE(result.clusters.size() == 2);
  CHECK(result.clusters[0] == std::vector<std::string>{"a", "b"});
  CHECK(result.clusters[1] == std::vector<std::string>{"c", "d"});
}

TEST_CASE("a single translation is one cluster of one") {
  auto table = table_of({{"only", {1, 0}}});
  auto result = cluster_translations(words({"only"}), table, {});
  REQUIRE(result.clusters.size() == 1);
  CHECK(result.clusters[0] == std::vector<std::string>{"only"});
}

TEST_CASE("the distance threshold must lie in (0, 2]") {
  auto table = table_of({{"a", {1, 0}}, {"b", {0, 1}}});
  ClusterParams params;
  params.distance_threshold = 0.0;
  CHECK_THROWS_AS(cluster_translations(words({"a", "b"}), table, params),
                  dfa::ContractError);
  params.distance_threshold = 2.5;
  CHECK_THROWS_AS(cluster_translations(words({"a", "b"}), table, params),
                  dfa::ContractError);
  params.distance_threshold = 2.0;
  CHECK_NOTHROW(cluster_translations(words({"a", "b"}), table, params));
}

TEST_CASE("all-OOV input yields zero clusters and full dropped set") {
  EmbeddingTable empty;
  empty.dim = 2;
  auto result = cluster_translations(words({"x", "y"}), empty, {});
  CHECK(result.clusters.empty());
  CHECK(result.dropped_oov == words({"x", "y"}));
}

TEST_CASE("complete linkage uses the farthest pair") {
  // Unit vectors with distances d(a,b)=0.2, d(b,c)~0.323, d(a,c)=0.9.
  // After the a-b merge, average linkage to c is ~0.612 (merges under 0.65)
  // while complete linkage is 0.9 (stops).
  auto table = table_of({{"a", {1.0f, 0.0f}},
                         {"b", {0.8f, 0.6f}},
                         {"c", {0.1f, 0.994987f}}});
  ClusterParams complete;
  complete.distance_threshold = 0.65;
  complete.linkage = Linkage::kComplete;
  auto result = cluster_translations(words({"a", "b", "c"}), table, complete);
  CHECK(result.clusters.size() == 2);

  ClusterParams average = complete;
  average.linkage = Linkage::kAverage;
  auto merged = cluster_translations(words({"a", "b", "c"}), table, average);
  CHECK(merged.clusters.size() == 1);
}

TEST_CASE("polysemy verdicts follow the cluster count") {
  auto split = table_of({{"银行", {1, 0}}, {"河岸", {0, 1}}});
  ClusterParams params;
  CHECK(is_semantically_polysemous("bank", words({"银行", "河岸"}), split,
                                   params));

  auto tight = table_of({{"大的", {1.0f, 0.0f}}, {"巨大的", {0.999f, 0.02f}}});
  CHECK_FALSE(
      is_semantically_polysemous("big", words({"大的", "巨大的"}), tight, params));
}

TEST_CASE("too few embedded translations cannot be judged polysemous") {
  auto table = table_of({{"银行", {1, 0}}});
  ClusterParams params;
  params.min_embedded_translations = 2;
  CHECK_FALSE(is_semantically_polysemous("bank", words({"银行", "missing"}),
                                         table, params));
}

TEST_CASE("build_polysemous_csu_set keeps split words and drops tight ones") {
  TranslationMap map;
  map.entries["bank"] = {"银行", "河岸"};
  map.entries["big"] = {"大的", "巨大的"};
  map.entries["cat"] = {"猫"};
  auto table = table_of({{"银行", {1, 0}},
                         {"河岸", {0, 1}},
                         {"大的", {1.0f, 0.0f}},
                         {"巨大的", {0.999f, 0.02f}}});
  auto result = build_polysemous_csu_set(map, table, {});
  CHECK(result.words == words({"bank"}));
  CHECK(result.candidates == 2);
  CHECK(result.filtered() == 1);
  CHECK(result.oov_dropped == 0);

  TranslationMap empty;
  CHECK(build_polysemous_csu_set(empty, table, {}).words.empty());
}

TEST_CASE("filtered set is always a subset of the multi-translation set") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> vec_part(-5, 5);
  std::uniform_int_distribution<int> n_targets(1, 5);
  for (int round = 0; round < 50; ++round) {
    TranslationMap map;
    EmbeddingTable table;
    table.dim = 3;
    for (int w = 0; w < 12; ++w) {
      std::string source = "s" + std::to_string(w);
      int count = n_targets(rng);
      for (int t = 0; t < count; ++t) {
        std::string target = "t" + std::to_string(w) + "_" + std::to_string(t);
        map.entries[source].insert(target);
        if (rng() % 5 != 0) {  // leave some OOV
          std::vector<float> vec{static_cast<float>(vec_part(rng)),
                                 static_cast<float>(vec_part(rng)),
                                 static_cast<float>(vec_part(rng))};
          if (vec[0] == 0 && vec[1] == 0 && vec[2] == 0) vec[0] = 1;
          table.vectors[target] = vec;
        }
      }
    }
    auto filtered = build_polysemous_csu_set(map, table, {});
    auto candidates = multi_translation_set(map);
    for (const auto& word : filtered.words) {
      CHECK(candidates.count(word) == 1);
    }
    CHECK(filtered.candidates == candidates.size());
  }
}

TEST_CASE("raising the threshold never increases the cluster count") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  for (int round = 0; round < 40; ++round) {
    EmbeddingTable table;
    table.dim = 4;
    std::set<std::string> translations;
    for (int w = 0; w < 8; ++w) {
      std::string word = "w" + std::to_string(w);
      std::vector<float> vec(4);
      for (auto& x : vec) x = dist(rng);
      vec[0] += 1.2f;
      table.vectors[word] = vec;
      translations.insert(word);
    }
    std::size_t previous = translations.size() + 1;
    for (double threshold : {0.1, 0.3, 0.5, 0.8, 1.2, 2.0}) {
      ClusterParams params;
      params.distance_threshold = threshold;
      auto result = cluster_translations(translations, table, params);
      CHECK(result.clusters.size() <= previous);
      previous = result.clusters.size();
    }
  }
}

TEST_CASE("clusters plus dropped OOV partition the input set") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  for (int round = 0; round < 40; ++round) {
    EmbeddingTable table;
    table.dim = 3;
    std::set<std::string> translations;
    for (int w = 0; w < 10; ++w) {
      std::string word = "p" + std::to_string(w);
      translations.insert(word);
      if (w % 3 != 0) {
        std::vector<float> vec(3);
        for (auto& x : vec) x = dist(rng);
        vec[1] += 1.1f;
        table.vectors[word] = vec;
      }
    }
    auto result = cluster_translations(translations, table, {});
    std::set<std::string> covered = result.dropped_oov;
    std::size_t member_count = result.dropped_oov.size();
    for (const auto& cluster : result.clusters) {
      CHECK_FALSE(cluster.empty());
      for (const auto& word : cluster) {
        CHECK(covered.insert(word).second);  // pairwise disjoint
        ++member_count;
      }
    }
    CHECK(covered == translations);
    CHECK(member_count == translations.size());
  }
}

TEST_CASE("clustering and set building are bit-deterministic across runs") {
  std::mt19937 rng(47);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  TranslationMap map;
  EmbeddingTable table;
  table.dim = 5;
  for (int w = 0; w < 20; ++w) {
    std::string source = "s" + std::to_string(w);
    for (int t = 0; t < 4; ++t) {
      std::string target = "t" + std::to_string(w) + "_" + std::to_string(t);
      map.entries[source].insert(target);
      std::vector<float> vec(5);
      for (auto& x : vec) x = dist(rng);
      vec[2] += 1.3f;
      table.vectors[target] = vec;
    }
  }
  auto first = build_polysemous_csu_set(map, table, {}, 4);
  for (int run = 0; run < 5; ++run) {
    auto again = build_polysemous_csu_set(map, table, {}, run % 3 + 1);
    CHECK(again.words == first.words);
    CHECK(again.candidates == first.candidates);
    CHECK(again.oov_dropped == first.oov_dropped);
  }
  for (const auto& [source, targets] : map.entries) {
    auto once = cluster_translations(targets, table, {});
    auto twice = cluster_translations(targets, table, {});
    CHECK(once.clusters == twice.clusters);
    CHECK(once.dropped_oov == twice.dropped_oov);
  }
}

TEST_CASE("CSU set file and stats sidecar round-trip") {
  dfa_test::TempDir dir;
  PolyFilterResult result;
  result.words = {"bank", "spring"};
  result.candidates = 5;
  result.oov_dropped = 3;
  std::string path = dir.file("poly.txt");
  write_csu_set_file(result, path);

  CHECK(read_csu_set_file(path) == result.words);
  auto stats = nlohmann::json::parse(dfa_test::read_text(path + ".stats.json"));
  CHECK(stats.at("candidates") == 5);
  CHECK(stats.at("filtered") == 2);
  CHECK(stats.at("oov_dropped") == 3);
  CHECK(stats.at("params").at("linkage") == "average");
  CHECK(stats.at("params").at("distance_threshold") == doctest::Approx(0.5));
}
