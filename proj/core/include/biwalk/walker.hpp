#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biwalk/kb_graph.hpp"

namespace biwalk {

class Lexicon;

enum class WalkModeKind { monolingual, bilingual };

// Random-walk corpus generation parameters. `alpha` is the per-step
// continuation probability; a walk halts with probability 1 - alpha after
// each move. Generation normally stops after `contexts` non-empty contexts;
// when `target_tokens` is set it instead stops at the first context
// boundary where the cumulative token count reaches the budget.
struct WalkConfig {
  double alpha = 0.85;
  std::uint64_t contexts = 0;
  std::optional<std::uint64_t> target_tokens;
  std::uint64_t seed = 1;
  WalkModeKind mode = WalkModeKind::bilingual;
  std::string language;  // required in monolingual mode
  int workers = 1;
};

// Walk output. Contexts are final token lines (space-separated); per-line
// token counts are kept per language slot of the source lexicon. The trace
// is filled only by walk_trace and records the emitting concept for every
// token, in order.
struct SyntheticCorpus {
  struct Emission {
    ConceptIndex source;
    std::uint8_t lang_slot;
    std::uint32_t word;  // index into Lexicon::words(concept, lang_slot)
  };

  std::array<std::string, 2> languages;
  std::vector<std::string> contexts;
  std::vector<std::array<std::uint32_t, 2>> line_tokens;
  std::array<std::uint64_t, 2> token_counts{0, 0};
  std::vector<std::vector<Emission>> trace;

  std::uint64_t total_tokens() const { return token_counts[0] + token_counts[1]; }
};

// Monolingual random walks: start uniform over concepts; each step emits one
// word uniform from D_l(c) (skipped when the concept has no words in l),
// moves to a uniform neighbor, then halts with probability 1 - alpha.
// Dead-end concepts halt the walk after their emission attempt. Contexts
// that end up empty are discarded and do not count toward the target.
SyntheticCorpus mono_walks(const KnowledgeGraph& graph, const Lexicon& lexicon,
                           const WalkConfig& config);

// Bilingual random walks: as above, but each step first picks one of the two
// languages with probability 1/2 and emits only if the concept is
// lexicalized in the chosen language.
SyntheticCorpus bi_walks(const KnowledgeGraph& graph, const Lexicon& lexicon,
                         const WalkConfig& config);

// Same algorithm and identical output corpus, with per-emission source
// concepts recorded in `trace`.
SyntheticCorpus walk_trace(const KnowledgeGraph& graph, const Lexicon& lexicon,
                           const WalkConfig& config);

// Plain-text corpus: one context per line, tokens space-separated.
void write_corpus(const SyntheticCorpus& corpus, const std::string& path);

// Sidecar trace TSV: context_index, position, concept, lang, token.
void write_trace(const SyntheticCorpus& corpus, const KnowledgeGraph& graph,
                 const Lexicon& lexicon, const std::string& path);

}  // namespace biwalk
