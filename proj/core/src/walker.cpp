#include "biwalk/walker.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include "biwalk/errors.hpp"
#include "biwalk/kb_graph.hpp"
#include "biwalk/rng.hpp"
#include "biwalk/text.hpp"

namespace biwalk {

namespace {

// Contexts are generated in fixed-size blocks, each from its own RNG stream
// derived from (seed, block index). Output order is by block, so the corpus
// is byte-identical for any worker count.
constexpr std::size_t kBlockContexts = 1024;
constexpr std::uint64_t kWalkStreamBase = 0x57414c4bULL << 16;

struct BlockResult {
  std::vector<std::string> lines;
  std::vector<std::array<std::uint32_t, 2>> line_tokens;
  std::vector<std::vector<SyntheticCorpus::Emission>> trace;
  std::uint64_t tokens = 0;
};

struct WalkContext {
  const KnowledgeGraph& graph;
  const Lexicon& lexicon;
  double alpha;
  bool bilingual;
  std::size_t mono_slot;
  bool want_trace;
};

// One walk of Algorithm 1/2. Returns false when the context came out empty
// (discarded, does not count toward the target).
bool run_one_walk(const WalkContext& wc, Rng& rng, std::string& line,
                  std::array<std::uint32_t, 2>& counts,
                  std::vector<SyntheticCorpus::Emission>& emissions) {
  line.clear();
  counts = {0, 0};
  emissions.clear();
  ConceptIndex c = static_cast<ConceptIndex>(rng.bounded(wc.graph.concept_count()));
  while (true) {
    const std::size_t slot = wc.bilingual ? rng.bounded(2) : wc.mono_slot;
    const auto& words = wc.lexicon.words(c, slot);
    if (!words.empty()) {
      const auto w = static_cast<std::uint32_t>(rng.bounded(words.size()));
      if (!line.empty()) line.push_back(' ');
      line.append(words[w]);
      ++counts[slot];
      if (wc.want_trace) {
        emissions.push_back({c, static_cast<std::uint8_t>(slot), w});
      }
    }
    const auto& nbrs = wc.graph.neighbors(c);
    if (nbrs.empty()) break;  // dead end: forced halt after the emission attempt
    c = nbrs[rng.bounded(nbrs.size())];
    if (rng.real() > wc.alpha) break;  // halt coin, checked after the move
  }
  return !line.empty();
}

BlockResult generate_block(const WalkContext& wc, std::uint64_t seed,
                           std::uint64_t block_index, std::size_t quota) {
  Rng rng = Rng::derive(seed, kWalkStreamBase + block_index);
  BlockResult block;
  block.lines.reserve(quota);
  block.line_tokens.reserve(quota);
  std::string line;
  std::array<std::uint32_t, 2> counts{};
  std::vector<SyntheticCorpus::Emission> emissions;
  while (block.lines.size() < quota) {
    if (!run_one_walk(wc, rng, line, counts, emissions)) continue;
    block.lines.push_back(line);
    block.line_tokens.push_back(counts);
    block.tokens += counts[0] + counts[1];
    if (wc.want_trace) block.trace.push_back(emissions);
  }
  return block;
}

// Generates blocks [first, first + n) in parallel, results in block order.
std::vector<BlockResult> generate_blocks(const WalkContext& wc, const WalkConfig& cfg,
                                         std::uint64_t first, std::size_t n,
                                         const std::vector<std::size_t>& quotas) {
  std::vector<BlockResult> results(n);
  const int workers = std::max(1, cfg.workers);
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      results[i] = generate_block(wc, cfg.seed, first + i, quotas[i]);
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      results[i] = generate_block(wc, cfg.seed, first + i, quotas[i]);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t nthreads = std::min<std::size_t>(workers, n);
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return results;
}

void append_block(SyntheticCorpus& corpus, BlockResult&& block) {
  for (std::size_t i = 0; i < block.lines.size(); ++i) {
    corpus.token_counts[0] += block.line_tokens[i][0];
    corpus.token_counts[1] += block.line_tokens[i][1];
  }
  std::move(block.lines.begin(), block.lines.end(), std::back_inserter(corpus.contexts));
  std::move(block.line_tokens.begin(), block.line_tokens.end(),
            std::back_inserter(corpus.line_tokens));
  std::move(block.trace.begin(), block.trace.end(), std::back_inserter(corpus.trace));
}

void validate(const KnowledgeGraph& graph, const Lexicon& lexicon, const WalkConfig& cfg,
              const WalkContext& wc) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw ConfigError("alpha must be in (0, 1)");
  }
  if (cfg.target_tokens) {
    if (*cfg.target_tokens < 1) throw ConfigError("target_tokens must be >= 1");
  } else if (cfg.contexts < 1) {
    throw ConfigError("contexts must be >= 1");
  }
  if (graph.concept_count() == 0) throw ConfigError("graph has no concepts");
  if (lexicon.concept_count() != graph.concept_count()) {
    throw ValidationError("lexicon was loaded against a different graph");
  }
  if (wc.bilingual) {
    if (lexicon.lexicalized_count(0) == 0 && lexicon.lexicalized_count(1) == 0) {
      throw ConfigError("no concept is lexicalized in either language");
    }
  } else if (lexicon.lexicalized_count(wc.mono_slot) == 0) {
    throw ConfigError("no concept is lexicalized in language " +
                      lexicon.languages()[wc.mono_slot]);
  }
}

SyntheticCorpus run_walks(const KnowledgeGraph& graph, const Lexicon& lexicon,
                          const WalkConfig& cfg, bool want_trace) {
  WalkContext wc{graph, lexicon, cfg.alpha,
                 cfg.mode == WalkModeKind::bilingual,
                 cfg.mode == WalkModeKind::bilingual ? 0 : lexicon.language_slot(cfg.language),
                 want_trace};
  validate(graph, lexicon, cfg, wc);

  SyntheticCorpus corpus;
  corpus.languages = lexicon.languages();

  if (cfg.target_tokens) {
    // Generate full blocks in waves until the budget is reached, then cut at
    // the first context whose inclusion meets the budget.
    const std::uint64_t budget = *cfg.target_tokens;
    std::uint64_t block = 0;
    while (corpus.total_tokens() < budget) {
      const std::size_t wave = std::max(1, cfg.workers);
      std::vector<std::size_t> quotas(wave, kBlockContexts);
      auto results = generate_blocks(wc, cfg, block, wave, quotas);
      for (auto& r : results) append_block(corpus, std::move(r));
      block += wave;
    }
    std::uint64_t cum = 0;
    std::size_t cut = 0;
    std::array<std::uint64_t, 2> counts{0, 0};
    while (cum < budget) {
      cum += corpus.line_tokens[cut][0] + corpus.line_tokens[cut][1];
      counts[0] += corpus.line_tokens[cut][0];
      counts[1] += corpus.line_tokens[cut][1];
      ++cut;
    }
    corpus.contexts.resize(cut);
    corpus.line_tokens.resize(cut);
    if (want_trace) corpus.trace.resize(cut);
    corpus.token_counts = counts;
    return corpus;
  }

  const std::uint64_t total = cfg.contexts;
  const std::uint64_t nblocks = (total + kBlockContexts - 1) / kBlockContexts;
  std::vector<std::size_t> quotas(nblocks, kBlockContexts);
  quotas.back() = static_cast<std::size_t>(total - (nblocks - 1) * kBlockContexts);
  auto results = generate_blocks(wc, cfg, 0, nblocks, quotas);
  corpus.contexts.reserve(total);
  corpus.line_tokens.reserve(total);
  for (auto& r : results) append_block(corpus, std::move(r));
  return corpus;
}

}  // namespace

SyntheticCorpus mono_walks(const KnowledgeGraph& graph, const Lexicon& lexicon,
                           const WalkConfig& config) {
  if (config.mode != WalkModeKind::monolingual) {
    throw ConfigError("mono_walks requires monolingual mode");
  }
  return run_walks(graph, lexicon, config, false);
}

SyntheticCorpus bi_walks(const KnowledgeGraph& graph, const Lexicon& lexicon,
                         const WalkConfig& config) {
  if (config.mode != WalkModeKind::bilingual) {
    throw ConfigError("bi_walks requires bilingual mode");
  }
  return run_walks(graph, lexicon, config, false);
}

SyntheticCorpus walk_trace(const KnowledgeGraph& graph, const Lexicon& lexicon,
                           const WalkConfig& config) {
  return run_walks(graph, lexicon, config, true);
}

void write_corpus(const SyntheticCorpus& corpus, const std::string& path) {
  write_lines(path, corpus.contexts);
}

void write_trace(const SyntheticCorpus& corpus, const KnowledgeGraph& graph,
                 const Lexicon& lexicon, const std::string& path) {
  if (corpus.trace.size() != corpus.contexts.size()) {
    throw ConfigError("corpus has no trace; generate it with walk_trace");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  for (std::size_t ctx = 0; ctx < corpus.trace.size(); ++ctx) {
    std::size_t pos = 0;
    for (const auto& e : corpus.trace[ctx]) {
      out << ctx << '\t' << pos << '\t' << graph.id_of(e.source) << '\t'
          << lexicon.languages()[e.lang_slot] << '\t'
          << lexicon.words(e.source, e.lang_slot)[e.word] << '\n';
      ++pos;
    }
  }
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace biwalk
