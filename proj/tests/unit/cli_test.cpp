// Drives the installed command-line surface end to end over a replay
// fixture: dump-templates, extract-poly, identify, translate, ablate,
// k-sweep and score.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "dfa/experiment.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const std::string& stdout_path) {
  std::string command = std::string(DFA_CLI_PATH) + " " + args + " > " +
                        stdout_path + " 2>&1";
  return std::system(command.c_str());
}

struct CliFixture {
  dfa_test::TempDir dir;
  dfa::ExperimentConfig config;
  std::string config_path;

  CliFixture() : config(dfa_test::make_en_zh_config(dir)) {
    dfa_test::record_fixture_cache(config, {1, 2, 8});
    config_path = dir.file("config.json");
    dfa_test::write_text(config_path,
                         dfa::experiment_config_to_json(config, false));
  }
};

}  // namespace

TEST_CASE("dump-templates emits the built-in table") {
  dfa_test::TempDir dir;
  std::string out = dir.file("templates.json");
  REQUIRE(run_cli("dump-templates", out) == 0);
  auto parsed = nlohmann::json::parse(dfa_test::read_text(out));
  REQUIRE(parsed.size() == 4);
  CHECK(parsed[0].at("pair") == "en-zh");
  CHECK(parsed[0].at("base_instruction") == "提供这句话的中文翻译:");

  REQUIRE(run_cli("dump-templates --pair en-de", out) == 0);
  auto one = nlohmann::json::parse(dfa_test::read_text(out));
  REQUIRE(one.size() == 1);
  CHECK(one[0].at("focus_header") ==
        "Ensure that the following words are accurately translated:");
}

TEST_CASE("extract-poly writes the set file and stats sidecar") {
  dfa_test::TempDir dir;
  dfa_test::write_text(dir.file("lexicon.txt"), dfa_test::fixture_lexicon());
  dfa_test::write_text(dir.file("vectors.vec"), dfa_test::fixture_vectors());
  std::string out = dir.file("stdout.txt");
  REQUIRE(run_cli("extract-poly --lexicon " + dir.file("lexicon.txt") +
                      " --embeddings " + dir.file("vectors.vec") +
                      " --source-lang en --target-lang zh --out " +
                      dir.file("poly.txt"),
                  out) == 0);
  auto words = dfa::read_csu_set_file(dir.file("poly.txt"));
  CHECK(words == std::set<std::string>{"bank", "spring"});
  CHECK(fs::exists(dir.file("poly.txt") + ".stats.json"));

  REQUIRE(run_cli("extract-poly --lexicon " + dir.file("lexicon.txt") +
                      " --source-lang en --target-lang zh --mode simple "
                      "--out " +
                      dir.file("simple.txt"),
                  out) == 0);
  CHECK(dfa::read_csu_set_file(dir.file("simple.txt")) ==
        std::set<std::string>{"bank", "big", "spring"});
}

TEST_CASE("identify, translate, ablate and k-sweep run over the fixture") {
  CliFixture fixture;
  std::string out = fixture.dir.file("stdout.txt");

  REQUIRE(run_cli("identify --config " + fixture.config_path + " --out " +
                      fixture.dir.file("csus.jsonl"),
                  out) == 0);
  auto jsonl = dfa_test::read_text(fixture.dir.file("csus.jsonl"));
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 5);

  REQUIRE(run_cli("translate --config " + fixture.config_path +
                      " --system baseline --out-dir " +
                      fixture.dir.file("t_out"),
                  out) == 0);
  auto report = nlohmann::json::parse(
      dfa_test::read_text(fixture.dir.file("t_out") + "/report.json"));
  REQUIRE(report.at("systems").size() == 1);
  CHECK(report.at("systems")[0].at("name") == "baseline");
  CHECK(report.at("provenance").at("input_digests").contains("lexicon"));

  REQUIRE(run_cli("ablate --config " + fixture.config_path + " --out-dir " +
                      fixture.dir.file("a_out"),
                  out) == 0);
  auto csv = dfa_test::read_text(fixture.dir.file("a_out") + "/summary.csv");
  CHECK(csv.find("\n+simple-poly,") != std::string::npos);
  CHECK(csv.find("\n-poly,") != std::string::npos);

  REQUIRE(run_cli("k-sweep --config " + fixture.config_path +
                      " --ks 1,2,8 --out-dir " + fixture.dir.file("k_out"),
                  out) == 0);
  auto sweep = dfa_test::read_text(fixture.dir.file("k_out") + "/k_sweep.csv");
  CHECK(sweep.rfind("k,", 0) == 0);
  CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 4);
}

TEST_CASE("score reports metrics over existing outputs") {
  dfa_test::TempDir dir;
  dfa_test::write_text(dir.file("hyp.txt"), "the cat sat on the mat\n");
  dfa_test::write_text(dir.file("ref.txt"), "the cat is on the mat\n");
  std::string out = dir.file("stdout.txt");
  REQUIRE(run_cli("score --hyp " + dir.file("hyp.txt") + " --ref " +
                      dir.file("ref.txt") + " --target-lang en",
                  out) == 0);
  auto parsed = nlohmann::json::parse(dfa_test::read_text(out));
  CHECK(parsed.at("n_segments") == 1);
  CHECK(parsed.at("bleu").get<double>() > 0.0);
  CHECK(parsed.at("signature").get<std::string>().find("13a-style") !=
        std::string::npos);
}

TEST_CASE("bad invocations exit nonzero with a message") {
  dfa_test::TempDir dir;
  std::string out = dir.file("stdout.txt");
  CHECK(run_cli("score --hyp /nonexistent --ref /nonexistent --target-lang en",
                out) != 0);
  CHECK(run_cli("translate --config /nonexistent.json", out) != 0);
}
