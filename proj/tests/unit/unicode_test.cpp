#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dfa/errors.hpp"
#include "dfa/unicode.hpp"

using namespace dfa;

TEST_CASE("well-formed text decodes with byte positions") {
  auto cps = utf8_decode("a银b");
  REQUIRE(cps.size() == 3);
  CHECK(cps[0].value == U'a');
  CHECK(cps[1].value == U'银');
  CHECK(cps[1].byte_offset == 1);
  CHECK(cps[1].byte_length == 3);
  CHECK(cps[2].byte_offset == 4);
  CHECK(utf8_length("提供这句话") == 5);
}

TEST_CASE("malformed sequences are rejected") {
  // Stray continuation byte.
  CHECK_FALSE(utf8_valid(std::string("\x80")));
  // Truncated two-byte sequence.
  CHECK_FALSE(utf8_valid(std::string("\xC3")));
  // Overlong encoding of '/'.
  CHECK_FALSE(utf8_valid(std::string("\xC0\xAF")));
  // UTF-16 surrogate half.
  CHECK_FALSE(utf8_valid(std::string("\xED\xA0\x80")));
  // Past U+10FFFF.
  CHECK_FALSE(utf8_valid(std::string("\xF4\x90\x80\x80")));
  CHECK_THROWS_AS(utf8_decode(std::string("\xC3")), FormatError);
}

TEST_CASE("encode/decode round-trips over random codepoints") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<char32_t> pick(1, 0x10FFFF);
  for (int round = 0; round < 2000; ++round) {
    char32_t cp = pick(rng);
    if (cp >= 0xD800 && cp <= 0xDFFF) continue;
    std::string bytes = utf8_encode(cp);
    auto decoded = utf8_decode(bytes);
    REQUIRE(decoded.size() == 1);
    CHECK(decoded[0].value == cp);
    CHECK(decoded[0].byte_length == bytes.size());
  }
}

TEST_CASE("validity check never throws on random bytes") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> length(0, 64);
  for (int round = 0; round < 2000; ++round) {
    std::string bytes;
    int n = length(rng);
    for (int i = 0; i < n; ++i) bytes.push_back(static_cast<char>(byte(rng)));
    bool ok = utf8_valid(bytes);
    if (ok) CHECK(utf8_decode(bytes).size() <= bytes.size());
  }
}

TEST_CASE("case folding covers ascii and extended latin") {
  CHECK(fold_case("BANK") == "bank");
  CHECK(fold_case("MÜNCHEN") == "münchen");
  CHECK(fold_case("Straße") == "straße");
  CHECK(fold_case("ŁÓDŹ") == "łódź");
  CHECK(fold_case("ÆON") == "æon");
  CHECK(fold_case("银行") == "银行");
  // The multiplication sign sits inside the Latin-1 uppercase block but is
  // not a letter.
  CHECK(fold_case(static_cast<char32_t>(0xD7)) == 0xD7);
}

TEST_CASE("character classes behave as the tokenizers expect") {
  CHECK(is_cjk(U'银'));
  CHECK_FALSE(is_cjk(U'a'));
  CHECK(is_latin_letter(U'ä'));
  CHECK_FALSE(is_latin_letter(U'×'));
  CHECK(is_word_char(U'7'));
  CHECK_FALSE(is_word_char(U'!'));
  CHECK(is_space(U'　'));  // ideographic space
  CHECK_FALSE(is_space(U'。'));
}
