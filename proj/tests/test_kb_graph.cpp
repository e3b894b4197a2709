#include <doctest.h>

#include <fstream>

#include "biwalk/errors.hpp"
#include "biwalk/kb_graph.hpp"
#include "test_util.hpp"

using namespace biwalk;
using testutil::TempDir;
using testutil::data_path;

namespace {

std::string write_file(const TempDir& dir, const std::string& name, const std::string& body) {
  const std::string path = dir.path(name);
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("duplicate and reversed edges collapse") {
  TempDir dir("graph");
  const auto path = write_file(dir, "e.tsv", "c1\tc2\nc2\tc1\nc1\tc2\n");
  const KnowledgeGraph g = load_graph(path);
  CHECK(g.concept_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.degree("c1") == 1);
  CHECK(g.neighbors(g.index_of("c1")) == std::vector<ConceptIndex>{g.index_of("c2")});
}

TEST_CASE("self-loops are rejected") {
  TempDir dir("graph");
  const auto path = write_file(dir, "e.tsv", "c1\tc1\n");
  CHECK_THROWS_AS(load_graph(path), ValidationError);
}

TEST_CASE("malformed lines carry the line number") {
  TempDir dir("graph");
  const auto path = write_file(dir, "e.tsv", "c1\tc2\nc3\n");
  CHECK_THROWS_WITH_AS(load_graph(path), doctest::Contains(":2:"), ParseError);
}

TEST_CASE("comments and blank lines are ignored") {
  TempDir dir("graph");
  const auto path = write_file(dir, "e.tsv", "# header\n\nc1\tc2\n  # indented\n");
  CHECK(load_graph(path).edge_count() == 1);
}

TEST_CASE("toy fixture has degree sum 16") {
  const KnowledgeGraph g = load_graph(data_path("toy.edges.tsv"));
  CHECK(g.concept_count() == 7);
  CHECK(g.edge_count() == 8);
  std::size_t degree_sum = 0;
  for (const auto& id : g.concept_ids()) degree_sum += g.degree(id);
  CHECK(degree_sum == 16);
  CHECK(degree_sum == 2 * g.edge_count());
  CHECK(g.degree("feline") == 5);  // the hub
}

TEST_CASE("degree of isolated and unknown concepts") {
  const KnowledgeGraph g = KnowledgeGraph::from_edges({{"a", "b"}}, {"island"});
  CHECK(g.degree("island") == 0);
  CHECK(g.degree("a") == 1);
  CHECK_THROWS_AS(g.degree("missing"), LookupError);
}

TEST_CASE("graph save/load round-trip preserves concepts and edges") {
  const KnowledgeGraph g = load_graph(data_path("toy.edges.tsv"));
  TempDir dir("graph");
  const auto path = dir.path("roundtrip.tsv");
  save_graph(g, path);
  const KnowledgeGraph g2 = load_graph(path);

  auto ids = g.concept_ids();
  auto ids2 = g2.concept_ids();
  std::sort(ids.begin(), ids.end());
  std::sort(ids2.begin(), ids2.end());
  CHECK(ids == ids2);

  auto edge_set = [](const KnowledgeGraph& kg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [a, b] : kg.edges()) {
      std::string ia = kg.id_of(a);
      std::string ib = kg.id_of(b);
      if (ib < ia) std::swap(ia, ib);
      out.emplace_back(ia, ib);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(edge_set(g) == edge_set(g2));
}

TEST_CASE("lexicon loads lowercased words grouped per language") {
  const KnowledgeGraph g = load_graph(data_path("toy.edges.tsv"));
  const Lexicon lex = load_lexicon(data_path("toy.lexicon.tsv"), g, {"en", "eu"});

  const auto lion = g.index_of("lion");
  CHECK(lex.words(lion, 0) == std::vector<std::string>{"lion"});  // "Lion" folded
  const auto ounce = g.index_of("ounce");
  CHECK(lex.words(ounce, 0) == std::vector<std::string>{"ounce", "snow_leopard"});
  CHECK(lex.words(ounce, 1) == std::vector<std::string>{"elur-pantera"});

  // fixture tallies: 4 concepts in both languages, 2 only en, 1 in neither
  std::size_t both = 0;
  std::size_t only_en = 0;
  std::size_t neither = 0;
  for (ConceptIndex c = 0; c < lex.concept_count(); ++c) {
    const bool en = lex.lexicalized(c, 0);
    const bool eu = lex.lexicalized(c, 1);
    both += en && eu;
    only_en += en && !eu;
    neither += !en && !eu;
  }
  CHECK(both == 4);
  CHECK(only_en == 2);
  CHECK(neither == 1);
  CHECK(lex.lexicalized_count(0) == 6);
  CHECK(lex.lexicalized_count(1) == 4);
}

TEST_CASE("lexicon referential integrity and language validation") {
  const KnowledgeGraph g = load_graph(data_path("toy.edges.tsv"));
  TempDir dir("lex");
  const auto unknown_concept = write_file(dir, "c.tsv", "c9\ten\tcat\n");
  CHECK_THROWS_AS(load_lexicon(unknown_concept, g, {"en", "eu"}), ValidationError);

  const auto unknown_lang = write_file(dir, "l.tsv", "lion\tfr\tlion\n");
  CHECK_THROWS_AS(load_lexicon(unknown_lang, g, {"en", "eu"}), ValidationError);

  const auto spacey = write_file(dir, "s.tsv", "lion\ten\tsnow leopard\n");
  CHECK_THROWS_AS(load_lexicon(spacey, g, {"en", "eu"}), ValidationError);

  const auto bad_fields = write_file(dir, "f.tsv", "lion\ten\n");
  CHECK_THROWS_AS(load_lexicon(bad_fields, g, {"en", "eu"}), ParseError);
}
