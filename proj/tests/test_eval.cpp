#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "biwalk/errors.hpp"
#include "biwalk/eval.hpp"
#include "biwalk/rng.hpp"
#include "biwalk/text.hpp"
#include "test_util.hpp"

using namespace biwalk;

namespace {

// O(n^2) average-rank Spearman: rank = #less + (#equal + 1)/2, then Pearson
// on the rank vectors. Independent of the sort-based implementation.
double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t less = 0;
      std::size_t equal = 0;
      for (std::size_t j = 0; j < n; ++j) {
        less += v[j] < v[i];
        equal += v[j] == v[i];
      }
      r[i] = static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

VectorTable angled_table() {
  // vectors at fixed angles from the x axis: cosine to "base" decreases
  VectorTable t;
  t.dim = 2;
  const std::vector<std::pair<std::string, double>> rows{
      {"base", 0.0}, {"close", 0.2}, {"near", 0.7}, {"far", 1.2}, {"opposite", 2.8}};
  for (const auto& [word, angle] : rows) {
    t.words.push_back(word);
    t.data.push_back(static_cast<float>(std::cos(angle)));
    t.data.push_back(static_cast<float>(std::sin(angle)));
  }
  t.rebuild_index();
  return t;
}

SimilarityDataset angled_dataset(bool reversed) {
  SimilarityDataset ds;
  const std::vector<std::string> words{"close", "near", "far", "opposite"};
  for (std::size_t i = 0; i < words.size(); ++i) {
    const double gold = reversed ? static_cast<double>(i + 1)
                                 : static_cast<double>(words.size() - i);
    ds.pairs.push_back({"base", "aa", words[i], "aa", gold});
  }
  return ds;
}

}  // namespace

TEST_CASE("cosine endpoints") {
  const std::vector<double> u{1.0, 1.0};
  const std::vector<double> v{1.0, 0.0};
  CHECK(cosine(std::span<const double>(u), std::span<const double>(u)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> w{0.0, 3.0};
  CHECK(cosine(std::span<const double>(v), std::span<const double>(w)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cosine(std::span<const double>(u), std::span<const double>(v)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  const std::vector<double> z{0.0, 0.0};
  CHECK_THROWS_AS(cosine(std::span<const double>(u), std::span<const double>(z)),
                  NumericError);
  const std::vector<double> d3{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(cosine(std::span<const double>(u), std::span<const double>(d3)),
                  ValidationError);
}

TEST_CASE("spearman fixed points and errors") {
  const std::vector<double> inc{1.0, 2.0, 3.0};
  const std::vector<double> dec{3.0, 2.0, 1.0};
  CHECK(spearman(inc, inc) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spearman(inc, dec) == doctest::Approx(-1.0).epsilon(1e-15));

  const std::vector<double> x{1.0, 2.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 3.0, 2.0, 4.0};
  CHECK(spearman(x, y) == doctest::Approx(spearman_oracle(x, y)).epsilon(1e-12));

  const std::vector<double> constant{2.0, 2.0, 2.0};
  CHECK_THROWS_AS(spearman(inc, constant), NumericError);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(spearman(one, one), ValidationError);
  const std::vector<double> mismatch{1.0, 2.0};
  CHECK_THROWS_AS(spearman(inc, mismatch), ValidationError);
  const std::vector<double> bad{1.0, std::nan(""), 2.0};
  CHECK_THROWS_AS(spearman(inc, bad), ValidationError);
}

TEST_CASE("spearman matches the brute-force oracle on random tied data") {
  Rng rng(55);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 5 + rng.bounded(60);
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.bounded(8));  // heavy ties
      y[i] = static_cast<double>(rng.bounded(8));
    }
    // skip degenerate constant draws
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) continue;
    CHECK(spearman(x, y) == doctest::Approx(spearman_oracle(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("spearman invariances") {
  Rng rng(56);
  std::vector<double> x(40);
  std::vector<double> y(40);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.real() * 10.0;
    y[i] = rng.real() * 10.0;
  }
  const double rho = spearman(x, y);
  CHECK(rho >= -1.0);
  CHECK(rho <= 1.0);
  CHECK(spearman(y, x) == doctest::Approx(rho).epsilon(1e-12));

  // strictly monotone transform of either argument preserves rho
  std::vector<double> xt(x.size());
  std::vector<double> yt(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xt[i] = std::exp(x[i] / 3.0);
    yt[i] = 5.0 * y[i] - 100.0;
  }
  CHECK(spearman(xt, y) == doctest::Approx(rho).epsilon(1e-12));
  CHECK(spearman(x, yt) == doctest::Approx(rho).epsilon(1e-12));
}

TEST_CASE("score_pairs on the angled fixture") {
  const VectorTable table = angled_table();
  SUBCASE("gold aligned with cosine gives rho 1") {
    const EvalReport r = score_pairs(table, angled_dataset(false));
    CHECK(r.rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.covered_pairs == 4);
    CHECK(r.oov_pairs == 0);
  }
  SUBCASE("reversed gold gives rho -1") {
    const EvalReport r = score_pairs(table, angled_dataset(true));
    CHECK(r.rho == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("rho is invariant to uniform vector scaling") {
    VectorTable scaled = table;
    for (auto& v : scaled.data) v *= 37.5f;
    CHECK(score_pairs(scaled, angled_dataset(false)).rho ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("OOV pairs are excluded and counted") {
    SimilarityDataset ds = angled_dataset(false);
    ds.pairs.push_back({"base", "aa", "missing", "aa", 2.5});
    const EvalReport r = score_pairs(table, ds);
    CHECK(r.covered_pairs == 4);
    CHECK(r.oov_pairs == 1);
    CHECK(r.covered_pairs + r.oov_pairs == r.rows.size());
    CHECK_FALSE(r.rows.back().predicted.has_value());
  }
  SUBCASE("midpoint policy scores OOV pairs zero") {
    SimilarityDataset ds = angled_dataset(false);
    ds.pairs.push_back({"base", "aa", "missing", "aa", 0.1});
    const EvalReport r = score_pairs(table, ds, OovPolicy::midpoint);
    CHECK(r.oov_pairs == 1);
    REQUIRE(r.rows.back().predicted.has_value());
    CHECK(*r.rows.back().predicted == 0.0);
  }
  SUBCASE("all pairs OOV is an evaluation error") {
    SimilarityDataset ds;
    ds.pairs.push_back({"nope", "aa", "nada", "aa", 1.0});
    ds.pairs.push_back({"none", "aa", "zero", "aa", 2.0});
    CHECK_THROWS_AS(score_pairs(table, ds), NumericError);
  }
  SUBCASE("multi-word entries fall back to underscore lookup") {
    VectorTable table2 = angled_table();
    table2.words[1] = "snow_leopard";
    table2.rebuild_index();
    SimilarityDataset ds;
    ds.pairs.push_back({"base", "aa", "snow leopard", "aa", 1.0});
    ds.pairs.push_back({"base", "aa", "near", "aa", 0.5});
    const EvalReport r = score_pairs(table2, ds);
    CHECK(r.covered_pairs == 2);
  }
}

TEST_CASE("build_crosslingual combines id-aligned monolingual datasets") {
  MonolingualDataset a;
  a.lang = "aa";
  a.rows = {{"id1", "car_a", "auto_a", 4.0},
            {"id2", "dog_a", "cat_a", 3.0},
            {"id3", "sun_a", "moon_a", 1.0},
            {"id4", "only_a", "here_a", 2.0},
            {"id5", "tea_a", "cup_a", 5.0}};
  MonolingualDataset b;
  b.lang = "bb";
  b.rows = {{"id1", "car_b", "auto_b", 2.0},
            {"id2", "dog_b", "cat_b", 5.0},
            {"id3", "sun_b", "moon_b", 3.0},
            {"id5", "tea_b", "cup_b", 5.0},
            {"id6", "only_b", "there_b", 0.5}};

  const CrossLingualBuild built = build_crosslingual(a, b);
  CHECK(built.skipped_ids == 2);  // id4 and id6
  CHECK(built.dataset.pairs.size() == 8);

  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::set<std::pair<Key, double>> got;
  for (const auto& p : built.dataset.pairs) {
    Key k{p.word1, p.lang1, p.word2, p.lang2};
    Key flipped{p.word2, p.lang2, p.word1, p.lang1};
    got.insert({std::min(k, flipped), p.gold});
  }
  auto expect = [&](const std::string& w1, const std::string& l1, const std::string& w2,
                    const std::string& l2, double gold) {
    Key k{w1, l1, w2, l2};
    Key flipped{w2, l2, w1, l1};
    CHECK(got.count({std::min(k, flipped), gold}) == 1);
  };
  expect("car_a", "aa", "auto_b", "bb", 3.0);
  expect("car_b", "bb", "auto_a", "aa", 3.0);
  expect("dog_a", "aa", "cat_b", "bb", 4.0);
  expect("dog_b", "bb", "cat_a", "aa", 4.0);
  expect("sun_a", "aa", "moon_b", "bb", 2.0);
  expect("tea_a", "aa", "cup_b", "bb", 5.0);
}

TEST_CASE("build_crosslingual edge cases") {
  SUBCASE("identical datasets keep the original scores") {
    MonolingualDataset a;
    a.lang = "aa";
    a.rows = {{"i1", "w1", "w2", 3.5}, {"i2", "w3", "w4", 1.5}};
    MonolingualDataset b = a;
    b.lang = "bb";
    const CrossLingualBuild built = build_crosslingual(a, b);
    CHECK(built.dataset.pairs.size() == 4);
    for (const auto& p : built.dataset.pairs) {
      if (p.word1 == "w1" || p.word2 == "w1") {
        CHECK(p.gold == 3.5);
      } else {
        CHECK(p.gold == 1.5);
      }
    }
  }
  SUBCASE("surface-identical combinations collapse to one pair") {
    MonolingualDataset a;
    a.lang = "aa";
    a.rows = {{"i1", "w", "w", 2.0}};
    MonolingualDataset b;
    b.lang = "bb";
    b.rows = {{"i1", "v", "v", 4.0}};
    const CrossLingualBuild built = build_crosslingual(a, b);
    REQUIRE(built.dataset.pairs.size() == 1);
    CHECK(built.dataset.pairs[0].gold == 3.0);
  }
  SUBCASE("one aligned pair yields two cross-lingual pairs") {
    MonolingualDataset a;
    a.lang = "aa";
    a.rows = {{"i1", "x", "y", 1.0}};
    MonolingualDataset b;
    b.lang = "bb";
    b.rows = {{"i1", "p", "q", 3.0}};
    const CrossLingualBuild built = build_crosslingual(a, b);
    CHECK(built.dataset.pairs.size() == 2);
    for (const auto& p : built.dataset.pairs) CHECK(p.gold == 2.0);
  }
  SUBCASE("same language is rejected") {
    MonolingualDataset a;
    a.lang = "aa";
    MonolingualDataset b;
    b.lang = "aa";
    CHECK_THROWS_AS(build_crosslingual(a, b), ValidationError);
  }
}

TEST_CASE("dataset files round trip and fold case") {
  testutil::TempDir dir("eval");
  write_lines(dir.path("d.tsv"),
              {"# comment", "Lion\ten\tLehoi\teu\t4.25", "paw\ten\tugaztun\teu\t1"});
  const SimilarityDataset ds = load_dataset(dir.path("d.tsv"));
  REQUIRE(ds.pairs.size() == 2);
  CHECK(ds.pairs[0].word1 == "lion");
  CHECK(ds.pairs[0].word2 == "lehoi");
  CHECK(ds.pairs[0].gold == 4.25);

  save_dataset(ds, dir.path("d2.tsv"));
  const SimilarityDataset again = load_dataset(dir.path("d2.tsv"));
  CHECK(again.pairs.size() == ds.pairs.size());

  write_lines(dir.path("bad.tsv"), {"a\ten\tb\teu\tnot_a_number"});
  CHECK_THROWS_AS(load_dataset(dir.path("bad.tsv")), ParseError);
  write_lines(dir.path("short.tsv"), {"a\ten\tb"});
  CHECK_THROWS_AS(load_dataset(dir.path("short.tsv")), ParseError);

  write_lines(dir.path("mono.tsv"), {"id1\tCar\tAuto\t3.5"});
  const MonolingualDataset mono = load_monolingual_dataset(dir.path("mono.tsv"), "aa");
  REQUIRE(mono.rows.size() == 1);
  CHECK(mono.rows[0].word1 == "car");
}

TEST_CASE("report json is written with coverage fields") {
  const VectorTable table = angled_table();
  const EvalReport r = score_pairs(table, angled_dataset(false));
  testutil::TempDir dir("report");
  write_report_json(r, dir.path("r.json"));
  const auto lines = read_lines(dir.path("r.json"));
  std::string joined;
  for (const auto& line : lines) joined += line;
  CHECK(joined.find("\"spearman\"") != std::string::npos);
  CHECK(joined.find("\"covered_pairs\": 4") != std::string::npos);
  CHECK(joined.find("\"pairs\"") != std::string::npos);
}
