#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "dfa/errors.hpp"
#include "dfa/lexicon.hpp"

using namespace dfa;

namespace {

TranslationMap parse(const std::string& text) {
  return parse_lexicon_text(text, "en", "zh");
}

// Independent brute-force oracle for the multi-translation set: one pass over
// the raw lines, no TranslationMap involved.
std::set<std::string> brute_force_multi(const std::string& text) {
  std::map<std::string, std::set<std::string>> seen;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string a, b, extra;
    if (fields >> a >> b && !(fields >> extra)) {
      seen[a].insert(b);
    }
  }
  std::set<std::string> result;
  for (const auto& [word, targets] : seen) {
    if (targets.size() >= 2) result.insert(word);
  }
  return result;
}

std::string random_lexicon(std::mt19937& rng, std::size_t lines) {
  std::uniform_int_distribution<int> source(0, 30);
  std::uniform_int_distribution<int> target(0, 50);
  std::uniform_int_distribution<int> malformed(0, 19);
  std::string text;
  for (std::size_t i = 0; i < lines; ++i) {
    if (malformed(rng) == 0) {
      text += "justoneword\n";
      continue;
    }
    text += "src" + std::to_string(source(rng)) + " tgt" +
            std::to_string(target(rng)) + "\n";
  }
  return text;
}

}  // namespace

TEST_CASE("parses well-formed pairs into sets") {
  auto map = parse("bank 银行\nbank 河岸\ncat 猫\n");
  CHECK(map.entries.size() == 2);
  CHECK(map.entries.at("bank") == std::set<std::string>{"银行", "河岸"});
  CHECK(map.entries.at("cat") == std::set<std::string>{"猫"});
  CHECK(map.skipped_lines == 0);
}

TEST_CASE("duplicate pairs collapse") {
  auto map = parse("bank 银行\nbank 银行\n");
  CHECK(map.entries.at("bank") == std::set<std::string>{"银行"});
}

TEST_CASE("malformed lines are skipped and counted") {
  auto map = parse("malformed\n");
  CHECK(map.entries.empty());
  CHECK(map.skipped_lines == 1);

  auto map3 = parse("a b c\nx y\n");
  CHECK(map3.skipped_lines == 1);
  CHECK(map3.entries.size() == 1);
}

TEST_CASE("tab separators and CRLF endings are accepted") {
  auto map = parse("bank\t银行\r\nbank 河岸\r\n");
  CHECK(map.entries.at("bank") == std::set<std::string>{"银行", "河岸"});
}

TEST_CASE("empty input yields an empty map, not an error") {
  auto map = parse("");
  CHECK(map.entries.empty());
  CHECK(map.skipped_lines == 0);
}

TEST_CASE("matching is case-sensitive at parse time") {
  auto map = parse("Bank 银行\nbank 河岸\n");
  CHECK(map.entries.size() == 2);
}

TEST_CASE("non-UTF-8 input is a decode error") {
  std::string bad = "bank ";
  bad.push_back(static_cast<char>(0xFF));
  bad.push_back('\n');
  CHECK_THROWS_AS(parse(bad), FormatError);
}

TEST_CASE("parse_lexicon reads from a stream") {
  std::istringstream in("bank 银行\n");
  auto map = parse_lexicon(in, "en", "zh");
  CHECK(map.source_lang == "en");
  CHECK(map.target_lang == "zh");
  CHECK(map.entries.size() == 1);
}

TEST_CASE("multi_translation_set follows the two-translation rule") {
  auto map = parse("bank 银行\nbank 河岸\ncat 猫\n");
  CHECK(multi_translation_set(map) == std::set<std::string>{"bank"});
  CHECK(multi_translation_set(parse("")).empty());
}

TEST_CASE("multi_translation_set membership matches per-word set sizes") {
  std::mt19937 rng(7);
  auto map = parse(random_lexicon(rng, 300));
  auto multi = multi_translation_set(map);
  for (const auto& [word, targets] : map.entries) {
    if (multi.count(word)) {
      CHECK(targets.size() >= 2);
    } else {
      CHECK(targets.size() == 1);
    }
  }
}

TEST_CASE("multi_translation_set equals the brute-force oracle on fuzzed input") {
  std::mt19937 rng(42);
  for (int round = 0; round < 100; ++round) {
    std::string text = random_lexicon(rng, 120);
    CHECK(multi_translation_set(parse(text)) == brute_force_multi(text));
  }
}

TEST_CASE("parsing is idempotent over concatenated duplicate files") {
  std::mt19937 rng(3);
  std::string text = random_lexicon(rng, 80);
  CHECK(parse(text + text) == parse(text));
}

TEST_CASE("serialize/re-parse round trip yields an equal map") {
  std::mt19937 rng(11);
  auto map = parse(random_lexicon(rng, 150));
  CHECK(parse(serialize_lexicon(map)) == map);
}
