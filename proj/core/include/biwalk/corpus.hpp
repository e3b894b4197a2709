#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "biwalk/walker.hpp"

namespace biwalk {

enum class CorpusSource { natural, synthetic, mixed };

// A line-delimited corpus with per-line language attribution. Natural
// corpora attribute every token to their declared language; synthetic
// bilingual corpora get their attribution from the walk trace.
struct TaggedCorpus {
  CorpusSource source = CorpusSource::natural;
  std::vector<std::string> languages;  // distinct, size 1 or 2
  std::vector<std::string> contexts;
  std::vector<std::array<std::uint32_t, 2>> line_tokens;  // per languages[i]
  std::array<std::uint64_t, 2> token_counts{0, 0};

  std::uint64_t total_tokens() const { return token_counts[0] + token_counts[1]; }
  // Tokens attributed to `lang`; zero when the language is absent.
  std::uint64_t tokens_for(const std::string& lang) const;
};

// Token budget split by language and by source (natural vs synthetic).
// Shares must each sum to 1. The tolerance is relative to total_tokens.
struct BalanceSpec {
  std::uint64_t total_tokens = 0;
  std::array<double, 2> language_share{0.5, 0.5};
  std::array<double, 2> source_share{0.5, 0.5};  // [natural, synthetic]
  double tolerance = 0.01;
};

// Language x source token matrix of a hybrid corpus (source 0 = natural,
// 1 = synthetic).
struct HybridAccounting {
  std::array<std::string, 2> languages;
  std::array<std::array<std::uint64_t, 2>, 2> tokens{};

  std::uint64_t total() const {
    return tokens[0][0] + tokens[0][1] + tokens[1][0] + tokens[1][1];
  }
};

struct HybridResult {
  TaggedCorpus corpus;
  HybridAccounting accounting;
};

// Pre-tokenized natural text, one sentence per line; empty lines skipped.
TaggedCorpus load_natural_corpus(const std::string& path, const std::string& language);

// Monolingual synthetic corpus (no trace needed).
TaggedCorpus load_synthetic_corpus(const std::string& path, const std::string& language);

// Bilingual synthetic corpus; the sidecar trace supplies per-line language
// attribution. Throws ValidationError when trace and corpus disagree.
TaggedCorpus load_synthetic_corpus(const std::string& corpus_path,
                                   const std::string& trace_path,
                                   const std::array<std::string, 2>& languages);

// In-memory adoption of walker output.
TaggedCorpus from_synthetic(const SyntheticCorpus& corpus);

void save_corpus(const TaggedCorpus& corpus, const std::string& path);

// Recomputes the whitespace token tally per language and checks it against
// the stored attribution. Returns counts aligned with corpus.languages.
std::vector<std::uint64_t> count_tokens(const TaggedCorpus& corpus);

// Uniformly samples whole contexts without replacement, in random order,
// stopping before the first context that would exceed the budget. The
// result is within one context length of the budget.
TaggedCorpus truncate_to_budget(const TaggedCorpus& corpus, std::uint64_t budget,
                                std::uint64_t seed);

// Uniform random permutation of the multiset union of all input contexts.
TaggedCorpus merge_shuffle(const std::vector<TaggedCorpus>& corpora, std::uint64_t seed);

// Truncates each source so per-language and per-source token shares meet the
// spec within tolerance, then merge-shuffles. Throws ConfigError naming the
// deficient cell when the budget is infeasible.
HybridResult build_hybrid(const TaggedCorpus& natural_a, const TaggedCorpus& natural_b,
                          const TaggedCorpus& synthetic, const BalanceSpec& spec,
                          std::uint64_t seed);

// Monolingual hybrid: one natural and one synthetic corpus in the same
// language, balanced by source share only.
HybridResult build_hybrid_mono(const TaggedCorpus& natural, const TaggedCorpus& synthetic,
                               std::uint64_t total_tokens,
                               std::array<double, 2> source_share, double tolerance,
                               std::uint64_t seed);

// TSV matrix: rows = language, columns = natural / synthetic.
void write_accounting(const HybridAccounting& accounting, const std::string& path);

}  // namespace biwalk
