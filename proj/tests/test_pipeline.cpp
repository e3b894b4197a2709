#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "biwalk/errors.hpp"
#include "biwalk/pipeline.hpp"
#include "biwalk/rng.hpp"
#include "biwalk/text.hpp"
#include "test_util.hpp"

using namespace biwalk;
using testutil::TempDir;
using testutil::data_path;

namespace {

// Deterministic pre-tokenized "natural" text over the toy lexicon words plus
// filler, so trained vocabularies cover the evaluation dataset.
void write_natural(const std::string& path, const std::vector<std::string>& words,
                   std::uint64_t seed, std::size_t lines) {
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(lines);
  for (std::size_t i = 0; i < lines; ++i) {
    std::string line;
    for (int j = 0; j < 5; ++j) {
      if (j > 0) line.push_back(' ');
      line += words[rng.bounded(words.size())];
    }
    out.push_back(line);
  }
  write_lines(path, out);
}

const std::vector<std::string> kEnWords{"lion",     "feline", "panthera", "paw",
                                        "ounce",    "mammal", "snow_leopard",
                                        "cat",      "tail",   "zoo"};
const std::vector<std::string> kEuWords{"lehoi",  "felido", "elur-pantera", "ugaztun",
                                        "katu",   "buztan", "zoo_eu",       "harri",
                                        "mendi",  "ibai"};

nlohmann::json base_config(const TempDir& dir) {
  nlohmann::json cfg;
  cfg["variant"] = "joint";
  cfg["source"] = "kb";
  cfg["languages"] = {"en", "eu"};
  cfg["graph"] = data_path("toy.edges.tsv");
  cfg["lexicon"] = data_path("toy.lexicon.tsv");
  cfg["dataset"] = data_path("toy.dataset.tsv");
  cfg["out_dir"] = dir.path("run");
  cfg["seed"] = 11;
  cfg["walk"] = {{"alpha", 0.85}, {"contexts", 2000}};
  cfg["train"] = {{"dim", 16}, {"window", 3}, {"negatives", 3}, {"epochs", 3},
                  {"min_count", 1}};
  return cfg;
}

std::string write_config(const TempDir& dir, const nlohmann::json& cfg,
                         const std::string& name = "config.json") {
  const std::string path = dir.path(name);
  std::ofstream out(path);
  out << cfg.dump(2);
  return path;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("joint kb pipeline produces corpus, model and report deterministically") {
  TempDir dir("pipe");
  nlohmann::json cfg = base_config(dir);
  const std::string cfg_path = write_config(dir, cfg);

  const PipelineConfig config = load_pipeline_config(cfg_path);
  const PipelineResult result = run_pipeline(config);
  CHECK(result.report.covered_pairs > 0);

  const nlohmann::json manifest = read_json(result.manifest_path);
  CHECK(manifest.at("status") == "ok");
  CHECK(manifest.at("outputs").contains("corpus"));
  CHECK(manifest.at("outputs").contains("model_wc"));
  CHECK(manifest.at("outputs").contains("eval"));
  for (const auto& [name, out] : manifest.at("outputs").items()) {
    CHECK(out.at("partial") == false);
  }

  // rerun into a second directory: identical output hashes
  nlohmann::json cfg2 = cfg;
  cfg2["out_dir"] = dir.path("run2");
  const PipelineResult result2 = run_pipeline(load_pipeline_config(write_config(dir, cfg2, "config2.json")));
  const nlohmann::json manifest2 = read_json(result2.manifest_path);
  for (const auto& [name, out] : manifest.at("outputs").items()) {
    CHECK(manifest2.at("outputs").at(name).at("fnv64") == out.at("fnv64"));
  }
  CHECK(result2.report.rho == result.report.rho);
}

TEST_CASE("jointc without constraints or lexicon fails before any work") {
  TempDir dir("pipe");
  nlohmann::json cfg = base_config(dir);
  cfg["variant"] = "jointc";
  cfg["lexicon"] = "";
  const PipelineConfig config = load_pipeline_config(write_config(dir, cfg));
  CHECK_THROWS_AS(validate_pipeline_config(config), ConfigError);
  CHECK_THROWS_AS(run_pipeline(config), ConfigError);
  // nothing was written
  CHECK_FALSE(std::filesystem::exists(dir.path("run")));
}

TEST_CASE("jointc kb mines constraints and trains with them") {
  TempDir dir("pipe");
  nlohmann::json cfg = base_config(dir);
  cfg["variant"] = "jointc";
  cfg["train"]["lambda"] = 0.01;
  const PipelineResult result = run_pipeline(load_pipeline_config(write_config(dir, cfg)));
  const nlohmann::json manifest = read_json(result.manifest_path);
  CHECK(manifest.at("outputs").contains("constraints"));
  CHECK(manifest.at("metrics").at("constraint_pairs_used").get<int>() > 0);
}

TEST_CASE("map hybrid pipeline balances both monolingual corpora") {
  TempDir dir("pipe");
  write_natural(dir.path("nat.en.txt"), kEnWords, 101, 1500);
  write_natural(dir.path("nat.eu.txt"), kEuWords, 102, 1500);

  nlohmann::json cfg = base_config(dir);
  cfg["variant"] = "map";
  cfg["source"] = "hyb";
  cfg["natural"] = {{"en", dir.path("nat.en.txt")}, {"eu", dir.path("nat.eu.txt")}};
  cfg["corpus"] = {{"total_tokens", 8000}, {"tolerance", 0.01}};
  cfg["map"] = {{"source_language", "eu"}};

  const PipelineResult result = run_pipeline(load_pipeline_config(write_config(dir, cfg)));
  const nlohmann::json manifest = read_json(result.manifest_path);
  CHECK(manifest.at("outputs").contains("map"));

  for (const std::string lang : {"en", "eu"}) {
    const auto& cell = manifest.at("metrics").at("hybrid_" + lang).at(lang);
    const double natural = cell.at("natural").get<double>();
    const double synthetic = cell.at("synthetic").get<double>();
    // each monolingual hybrid: 4000 tokens split 50/50 by source within 1%
    CHECK(std::abs(natural - 2000.0) <= 40.0);
    CHECK(std::abs(synthetic - 2000.0) <= 40.0);
  }
}

TEST_CASE("joint txt pipeline balances languages by truncation") {
  TempDir dir("pipe");
  write_natural(dir.path("nat.en.txt"), kEnWords, 103, 2000);  // 10000 tokens
  write_natural(dir.path("nat.eu.txt"), kEuWords, 104, 800);   // 4000 tokens

  nlohmann::json cfg = base_config(dir);
  cfg["source"] = "txt";
  cfg["natural"] = {{"en", dir.path("nat.en.txt")}, {"eu", dir.path("nat.eu.txt")}};
  const PipelineResult result = run_pipeline(load_pipeline_config(write_config(dir, cfg)));
  const nlohmann::json manifest = read_json(result.manifest_path);
  // balanced to twice the smaller corpus
  CHECK(manifest.at("metrics").at("corpus_total").get<std::uint64_t>() == 8000);
}

TEST_CASE("all nine variant x source combinations run end to end") {
  TempDir dir("matrix");
  write_natural(dir.path("nat.en.txt"), kEnWords, 201, 1500);
  write_natural(dir.path("nat.eu.txt"), kEuWords, 202, 1500);

  for (const std::string variant : {"map", "joint", "jointc"}) {
    for (const std::string source : {"txt", "kb", "hyb"}) {
      CAPTURE(variant);
      CAPTURE(source);
      nlohmann::json cfg = base_config(dir);
      cfg["variant"] = variant;
      cfg["source"] = source;
      cfg["out_dir"] = dir.path("run_" + variant + "_" + source);
      cfg["natural"] = {{"en", dir.path("nat.en.txt")}, {"eu", dir.path("nat.eu.txt")}};
      if (source == "hyb") {
        cfg["corpus"] = {{"total_tokens", 8000}, {"tolerance", 0.01}};
      }
      const PipelineResult result = run_pipeline(
          load_pipeline_config(write_config(dir, cfg, variant + source + ".json")));
      CHECK(result.report.covered_pairs > 0);
      CHECK(read_json(result.manifest_path).at("status") == "ok");
    }
  }
}

TEST_CASE("failed stages leave a failed manifest with the stage name") {
  TempDir dir("pipe");
  nlohmann::json cfg = base_config(dir);
  cfg["dataset"] = dir.path("missing.tsv");
  const PipelineConfig config = load_pipeline_config(write_config(dir, cfg));
  CHECK_THROWS_AS(run_pipeline(config), Error);
  const nlohmann::json manifest = read_json(dir.path("run") + "/manifest.json");
  CHECK(manifest.at("status") == "failed");
  CHECK(manifest.at("failed_stage") == "load-dataset");
}

TEST_CASE("config overrides reach into nested keys") {
  TempDir dir("pipe");
  const std::string cfg_path = write_config(dir, base_config(dir));
  const PipelineConfig config =
      load_pipeline_config(cfg_path, {"seed=99", "train.dim=8", "variant=jointc"});
  CHECK(config.seed == 99);
  CHECK(config.train.dim == 8);
  CHECK(config.variant == Variant::jointc);
}

TEST_CASE("config validation catches missing inputs") {
  TempDir dir("pipe");
  SUBCASE("hyb needs total_tokens") {
    nlohmann::json cfg = base_config(dir);
    cfg["source"] = "hyb";
    cfg["natural"] = {{"en", "x"}, {"eu", "y"}};
    CHECK_THROWS_WITH_AS(
        validate_pipeline_config(load_pipeline_config(write_config(dir, cfg))),
        doctest::Contains("total_tokens"), ConfigError);
  }
  SUBCASE("kb needs graph and lexicon") {
    nlohmann::json cfg = base_config(dir);
    cfg["graph"] = "";
    CHECK_THROWS_AS(validate_pipeline_config(load_pipeline_config(write_config(dir, cfg))),
                    ConfigError);
  }
  SUBCASE("txt needs both natural corpora") {
    nlohmann::json cfg = base_config(dir);
    cfg["source"] = "txt";
    CHECK_THROWS_AS(validate_pipeline_config(load_pipeline_config(write_config(dir, cfg))),
                    ConfigError);
  }
}
