#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>
#include <stdexcept>

#include "dfa/embeddings.hpp"
#include "dfa/errors.hpp"

using namespace dfa;

namespace {

EmbeddingTable load(const std::string& text,
                    std::optional<std::set<std::string>> filter = std::nullopt) {
  std::istringstream in(text);
  return load_embeddings(in, filter, "zh");
}

}  // namespace

TEST_CASE("loads header and vectors") {
  auto table = load("2 3\na 1 0 0\nb 0 1 0\n");
  CHECK(table.dim == 3);
  CHECK(table.vectors.size() == 2);
  CHECK(table.contains("a"));
  CHECK((*table.find("b"))[1] == doctest::Approx(1.0));
}

TEST_CASE("vocab filter keeps only requested words") {
  auto table = load("2 3\na 1 0 0\nb 0 1 0\n", std::set<std::string>{"a"});
  CHECK(table.vectors.size() == 1);
  CHECK(table.contains("a"));
  CHECK_FALSE(table.contains("b"));
}

TEST_CASE("dimension mismatch names the offending word") {
  try {
    load("1 3\na 1 0\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("'a'") != std::string::npos);
  }
}

TEST_CASE("missing or bad header is a format error") {
  CHECK_THROWS_AS(load(""), FormatError);
  CHECK_THROWS_AS(load("notacount x\n"), FormatError);
  CHECK_THROWS_AS(load("5\n"), FormatError);
}

TEST_CASE("zero vectors are dropped with a count") {
  auto table = load("2 2\nzero 0 0\nok 1 0\n");
  CHECK(table.vectors.size() == 1);
  CHECK(table.dropped_zero_vectors == 1);
  CHECK_FALSE(table.contains("zero"));
}

TEST_CASE("non-finite components are format errors") {
  CHECK_THROWS_AS(load("1 2\na nan 1\n"), FormatError);
  CHECK_THROWS_AS(load("1 2\na inf 1\n"), FormatError);
}

TEST_CASE("word count equals well-formed body lines minus exclusions") {
  auto table = load("4 2\na 1 0\nb 0 1\nc 1 1\nzero 0 0\n");
  CHECK(table.vectors.size() == 3);
  CHECK(table.dropped_zero_vectors == 1);
}

TEST_CASE("cosine of identical vectors is exactly 1") {
  std::vector<float> v{1, 2, 2};
  CHECK(cosine_similarity(v, v) == 1.0);
}

TEST_CASE("cosine of orthogonal vectors is 0, antipodal is -1") {
  std::vector<float> x{1, 0}, y{0, 1}, nx{-1, 0};
  CHECK(cosine_similarity(x, y) == doctest::Approx(0.0));
  CHECK(cosine_similarity(x, nx) == doctest::Approx(-1.0));
}

TEST_CASE("zero vector is a domain error") {
  std::vector<float> z{0, 0}, v{1, 0};
  CHECK_THROWS_AS(cosine_similarity(z, v), std::domain_error);
  CHECK_THROWS_AS(cosine_similarity(v, z), std::domain_error);
}

TEST_CASE("length mismatch is rejected") {
  std::vector<float> a{1, 0}, b{1, 0, 0};
  CHECK_THROWS_AS(cosine_similarity(a, b), std::invalid_argument);
}

TEST_CASE("cosine symmetry and positive scale invariance") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  // Power-of-two scales keep c*u exactly representable, so the check
  // isolates the similarity math from input rounding.
  const float scales[] = {0.25f, 0.5f, 2.0f, 4.0f, 8.0f};
  for (int round = 0; round < 200; ++round) {
    std::vector<float> u(8), v(8);
    for (auto& x : u) x = dist(rng);
    for (auto& x : v) x = dist(rng);
    u[0] += 1.5f;  // keep away from the zero vector
    v[0] += 1.5f;
    double forward = cosine_similarity(u, v);
    CHECK(forward == cosine_similarity(v, u));
    CHECK(forward >= -1.0);
    CHECK(forward <= 1.0);

    float c = scales[rng() % 5];
    std::vector<float> cu(u);
    for (auto& x : cu) x *= c;
    CHECK(cosine_similarity(cu, v) == doctest::Approx(forward).epsilon(1e-9));
  }
}

TEST_CASE("clamping holds against rounding on near-parallel vectors") {
  std::vector<float> u{0.1f, 0.1f, 0.1f};
  std::vector<float> v{0.3f, 0.3f, 0.3f};
  double sim = cosine_similarity(u, v);
  CHECK(sim <= 1.0);
  CHECK(sim == doctest::Approx(1.0));
}
