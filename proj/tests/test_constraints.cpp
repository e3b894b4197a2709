#include <doctest.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "biwalk/constraints.hpp"
#include "biwalk/errors.hpp"
#include "biwalk/kb_graph.hpp"
#include "biwalk/text.hpp"
#include "test_util.hpp"

using namespace biwalk;
using testutil::TempDir;
using testutil::data_path;

namespace {

struct Kb {
  KnowledgeGraph graph;
  Lexicon lexicon;
};

Kb load_toy() {
  KnowledgeGraph g = load_graph(data_path("toy.edges.tsv"));
  Lexicon l = load_lexicon(data_path("toy.lexicon.tsv"), g, {"en", "eu"});
  return {std::move(g), std::move(l)};
}

using PairKey = std::tuple<std::string, std::string, std::string, std::string>;

// Independent enumeration: all unordered pairs of tagged words per concept,
// de-duplicated globally.
std::set<PairKey> brute_force_pairs(const Lexicon& lex) {
  std::set<PairKey> out;
  for (ConceptIndex c = 0; c < lex.concept_count(); ++c) {
    std::vector<std::pair<std::string, std::string>> members;  // (lang, word)
    for (std::size_t slot = 0; slot < 2; ++slot) {
      for (const auto& w : lex.words(c, slot)) {
        members.emplace_back(lex.languages()[slot], w);
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (i == j || members[i] == members[j]) continue;
        auto a = members[i];
        auto b = members[j];
        if (b < a) std::swap(a, b);
        out.insert({a.first, a.second, b.first, b.second});
      }
    }
  }
  return out;
}

std::set<PairKey> as_keys(const ConstraintSet& cs) {
  std::set<PairKey> out;
  for (const auto& p : cs.pairs()) {
    out.insert({p.a.lang, p.a.word, p.b.lang, p.b.word});
  }
  return out;
}

}  // namespace

TEST_CASE("single bilingual and monolingual pairs") {
  const KnowledgeGraph g = KnowledgeGraph::from_edges({{"c1", "c2"}});
  SUBCASE("one word per language gives one bilingual pair") {
    Lexicon lex({"en", "eu"}, g.concept_count());
    lex.add_word(0, 0, "x");
    lex.add_word(0, 1, "y");
    const ConstraintSet cs = mine_constraints(lex);
    REQUIRE(cs.size() == 1);
    CHECK(cs.pairs()[0].bilingual());
    CHECK(cs.bilingual_count() == 1);
  }
  SUBCASE("two synonyms in one language give one monolingual pair") {
    Lexicon lex({"en", "eu"}, g.concept_count());
    lex.add_word(0, 0, "x1");
    lex.add_word(0, 0, "x2");
    const ConstraintSet cs = mine_constraints(lex);
    REQUIRE(cs.size() == 1);
    CHECK_FALSE(cs.pairs()[0].bilingual());
  }
}

TEST_CASE("toy fixture matches the brute-force oracle") {
  const Kb kb = load_toy();
  const ConstraintSet cs = mine_constraints(kb.lexicon);
  CHECK(as_keys(cs) == brute_force_pairs(kb.lexicon));
  CHECK(cs.size() == 6);
  CHECK(cs.bilingual_count() == 5);
}

TEST_CASE("pairs are stored canonically and closed under symmetry") {
  const Kb kb = load_toy();
  const ConstraintSet cs = mine_constraints(kb.lexicon);
  for (const auto& p : cs.pairs()) {
    CHECK((p.a < p.b));
    // both words exist in the lexicon under the recorded language
    auto in_lexicon = [&](const TaggedWord& tw) {
      const std::size_t slot = kb.lexicon.language_slot(tw.lang);
      for (ConceptIndex c = 0; c < kb.lexicon.concept_count(); ++c) {
        const auto& words = kb.lexicon.words(c, slot);
        if (std::find(words.begin(), words.end(), tw.word) != words.end()) return true;
      }
      return false;
    };
    CHECK(in_lexicon(p.a));
    CHECK(in_lexicon(p.b));
    // symmetric closure through the neighbor index
    const auto& na = cs.neighbors(p.a.word, p.a.lang);
    const auto& nb = cs.neighbors(p.b.word, p.b.lang);
    CHECK(std::find(na.begin(), na.end(), p.b) != na.end());
    CHECK(std::find(nb.begin(), nb.end(), p.a) != nb.end());
  }
}

TEST_CASE("mining is invariant to lexicon file order") {
  const Kb kb = load_toy();
  auto lines = read_lines(data_path("toy.lexicon.tsv"));
  std::reverse(lines.begin(), lines.end());
  TempDir dir("cs");
  write_lines(dir.path("rev.tsv"), lines);
  const Lexicon reversed = load_lexicon(dir.path("rev.tsv"), kb.graph, {"en", "eu"});
  CHECK(as_keys(mine_constraints(kb.lexicon)) == as_keys(mine_constraints(reversed)));
}

TEST_CASE("shared synsets collapse to one constraint") {
  // the same word pair appears under two concepts
  const KnowledgeGraph g = KnowledgeGraph::from_edges({{"c1", "c2"}});
  Lexicon lex({"en", "eu"}, g.concept_count());
  for (ConceptIndex c : {0u, 1u}) {
    lex.add_word(c, 0, "same");
    lex.add_word(c, 1, "berdin");
  }
  CHECK(mine_constraints(lex).size() == 1);
}

TEST_CASE("translation_dictionary projects bilingual pairs") {
  const Kb kb = load_toy();
  const ConstraintSet cs = mine_constraints(kb.lexicon);

  const auto en_eu = translation_dictionary(cs, "en", "eu");
  const auto eu_en = translation_dictionary(cs, "eu", "en");
  CHECK(en_eu.size() == cs.bilingual_count());
  CHECK(en_eu.size() == eu_en.size());
  CHECK(std::is_sorted(en_eu.begin(), en_eu.end()));
  // spot-check direction
  CHECK(std::find(en_eu.begin(), en_eu.end(), std::make_pair(std::string("lion"),
                                                             std::string("lehoi"))) !=
        en_eu.end());
  CHECK(std::find(eu_en.begin(), eu_en.end(), std::make_pair(std::string("lehoi"),
                                                             std::string("lion"))) !=
        eu_en.end());

  CHECK_THROWS_AS(translation_dictionary(cs, "en", "en"), ValidationError);
  CHECK_THROWS_AS(translation_dictionary(cs, "en", "fr"), ValidationError);
}

TEST_CASE("monolingual-only constraint set has an empty dictionary") {
  const KnowledgeGraph g = KnowledgeGraph::from_edges({{"c1", "c2"}});
  Lexicon lex({"en", "eu"}, g.concept_count());
  lex.add_word(0, 0, "x1");
  lex.add_word(0, 0, "x2");
  const ConstraintSet cs = mine_constraints(lex);
  CHECK(translation_dictionary(cs, "en", "eu").empty());
}

TEST_CASE("constraints_for returns the union over synsets minus the word itself") {
  const KnowledgeGraph g = KnowledgeGraph::from_edges({{"s1", "s2"}});
  Lexicon lex({"en", "eu"}, g.concept_count());
  const ConceptIndex s1 = g.index_of("s1");
  const ConceptIndex s2 = g.index_of("s2");
  lex.add_word(s1, 0, "poly");
  lex.add_word(s1, 0, "x");
  lex.add_word(s2, 0, "poly");
  lex.add_word(s2, 1, "y");
  const ConstraintSet cs = mine_constraints(lex);

  const auto& nbrs = cs.neighbors("poly", "en");
  REQUIRE(nbrs.size() == 2);
  CHECK(nbrs[0] == TaggedWord{"x", "en"});
  CHECK(nbrs[1] == TaggedWord{"y", "eu"});
  CHECK(cs.neighbors("unknown", "en").empty());
}

TEST_CASE("constraint file round trip and validation") {
  const Kb kb = load_toy();
  const ConstraintSet cs = mine_constraints(kb.lexicon);
  TempDir dir("cs");
  save_constraints(cs, dir.path("c.tsv"));
  const ConstraintSet loaded = load_constraints(dir.path("c.tsv"));
  CHECK(as_keys(loaded) == as_keys(cs));

  write_lines(dir.path("badkind.tsv"), {"a\ten\tb\teu\tmonolingual"});
  CHECK_THROWS_AS(load_constraints(dir.path("badkind.tsv")), ValidationError);
  write_lines(dir.path("badfields.tsv"), {"a\ten\tb\teu"});
  CHECK_THROWS_AS(load_constraints(dir.path("badfields.tsv")), ParseError);
  write_lines(dir.path("selfpair.tsv"), {"a\ten\ta\ten\tmonolingual"});
  CHECK_THROWS_AS(load_constraints(dir.path("selfpair.tsv")), ValidationError);
}

TEST_CASE("bilingual_only filters monolingual pairs") {
  const Kb kb = load_toy();
  const ConstraintSet cs = mine_constraints(kb.lexicon);
  const ConstraintSet bi = cs.bilingual_only();
  CHECK(bi.size() == cs.bilingual_count());
  for (const auto& p : bi.pairs()) CHECK(p.bilingual());
}
