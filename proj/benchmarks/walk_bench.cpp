#include <benchmark/benchmark.h>

#include <string>
#include <utility>
#include <vector>

#include "biwalk/kb_graph.hpp"
#include "biwalk/walker.hpp"

namespace {

using namespace biwalk;

// Ring graph with chords, every concept lexicalized in both languages.
std::pair<KnowledgeGraph, Lexicon> make_kb(std::size_t n) {
  std::vector<std::pair<std::string, std::string>> edges;
  auto name = [](std::size_t i) { return "c" + std::to_string(i); };
  for (std::size_t i = 0; i < n; ++i) {
    edges.emplace_back(name(i), name((i + 1) % n));
    edges.emplace_back(name(i), name((i + 7) % n));
  }
  KnowledgeGraph graph = KnowledgeGraph::from_edges(edges);
  Lexicon lexicon({"aa", "bb"}, graph.concept_count());
  for (std::size_t i = 0; i < n; ++i) {
    const ConceptIndex c = graph.index_of(name(i));
    lexicon.add_word(c, 0, "a" + std::to_string(i));
    lexicon.add_word(c, 1, "b" + std::to_string(i));
  }
  return {std::move(graph), std::move(lexicon)};
}

void BM_BilingualWalks(benchmark::State& state) {
  const auto [graph, lexicon] = make_kb(static_cast<std::size_t>(state.range(0)));
  WalkConfig config;
  config.alpha = 0.85;
  config.contexts = 10000;
  config.seed = 7;
  config.mode = WalkModeKind::bilingual;

  std::uint64_t tokens = 0;
  for (auto _ : state) {
    const SyntheticCorpus corpus = bi_walks(graph, lexicon, config);
    tokens = corpus.total_tokens();
    benchmark::DoNotOptimize(corpus.contexts.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tokens));
}

void BM_MonolingualWalks(benchmark::State& state) {
  const auto [graph, lexicon] = make_kb(static_cast<std::size_t>(state.range(0)));
  WalkConfig config;
  config.alpha = 0.85;
  config.contexts = 10000;
  config.seed = 7;
  config.mode = WalkModeKind::monolingual;
  config.language = "aa";

  for (auto _ : state) {
    const SyntheticCorpus corpus = mono_walks(graph, lexicon, config);
    benchmark::DoNotOptimize(corpus.contexts.data());
  }
}

}  // namespace

BENCHMARK(BM_BilingualWalks)->Arg(64)->Arg(1024)->Arg(16384);
BENCHMARK(BM_MonolingualWalks)->Arg(1024);
