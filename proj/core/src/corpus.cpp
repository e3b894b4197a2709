#include "biwalk/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "biwalk/errors.hpp"
#include "biwalk/rng.hpp"
#include "biwalk/text.hpp"

namespace biwalk {

namespace {

void refresh_totals(TaggedCorpus& corpus) {
  corpus.token_counts = {0, 0};
  for (const auto& lt : corpus.line_tokens) {
    corpus.token_counts[0] += lt[0];
    corpus.token_counts[1] += lt[1];
  }
}

std::size_t slot_of(const std::vector<std::string>& languages, const std::string& lang) {
  for (std::size_t i = 0; i < languages.size(); ++i) {
    if (languages[i] == lang) return i;
  }
  return languages.size();
}

void check_spec(const BalanceSpec& spec) {
  if (spec.total_tokens < 1) throw ConfigError("balance spec: total_tokens must be >= 1");
  if (spec.tolerance < 0) throw ConfigError("balance spec: tolerance must be >= 0");
  for (double s : {spec.language_share[0], spec.language_share[1], spec.source_share[0],
                   spec.source_share[1]}) {
    if (s < 0.0 || s > 1.0) throw ConfigError("balance spec: shares must be in [0, 1]");
  }
  if (std::abs(spec.language_share[0] + spec.language_share[1] - 1.0) > 1e-9 ||
      std::abs(spec.source_share[0] + spec.source_share[1] - 1.0) > 1e-9) {
    throw ConfigError("balance spec: shares must sum to 1");
  }
}

std::uint64_t rounded_share(std::uint64_t total, double share) {
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(total) * share));
}

void check_within(const std::string& what, std::uint64_t actual, std::uint64_t target,
                  std::uint64_t slack) {
  const std::uint64_t diff = actual > target ? actual - target : target - actual;
  if (diff > slack) {
    throw ConfigError("hybrid balance failed for " + what + ": got " +
                      std::to_string(actual) + " tokens, target " + std::to_string(target) +
                      " (slack " + std::to_string(slack) + ")");
  }
}

}  // namespace

std::uint64_t TaggedCorpus::tokens_for(const std::string& lang) const {
  const std::size_t slot = slot_of(languages, lang);
  return slot < languages.size() ? token_counts[slot] : 0;
}

TaggedCorpus load_natural_corpus(const std::string& path, const std::string& language) {
  TaggedCorpus corpus;
  corpus.source = CorpusSource::natural;
  corpus.languages = {language};
  for (auto& line : read_lines(path)) {
    const auto n = static_cast<std::uint32_t>(count_ws_tokens(line));
    if (n == 0) continue;
    corpus.contexts.push_back(std::move(line));
    corpus.line_tokens.push_back({n, 0});
  }
  refresh_totals(corpus);
  return corpus;
}

TaggedCorpus load_synthetic_corpus(const std::string& path, const std::string& language) {
  TaggedCorpus corpus = load_natural_corpus(path, language);
  corpus.source = CorpusSource::synthetic;
  return corpus;
}

TaggedCorpus load_synthetic_corpus(const std::string& corpus_path,
                                   const std::string& trace_path,
                                   const std::array<std::string, 2>& languages) {
  TaggedCorpus corpus;
  corpus.source = CorpusSource::synthetic;
  corpus.languages = {languages[0], languages[1]};
  corpus.contexts = read_lines(corpus_path);
  while (!corpus.contexts.empty() && corpus.contexts.back().empty()) {
    corpus.contexts.pop_back();
  }
  corpus.line_tokens.assign(corpus.contexts.size(), {0, 0});

  // Tokenized view of each context, used to validate the trace against the
  // corpus position by position.
  std::vector<std::vector<std::string_view>> tokens(corpus.contexts.size());
  for (std::size_t i = 0; i < corpus.contexts.size(); ++i) {
    if (corpus.contexts[i].empty()) {
      throw ValidationError(corpus_path + ": empty context at line " + std::to_string(i + 1));
    }
    tokens[i] = split_ws(corpus.contexts[i]);
  }

  const auto trace_lines = read_lines(trace_path);
  std::uint64_t attributed = 0;
  for (std::size_t i = 0; i < trace_lines.size(); ++i) {
    const std::string_view line = trace_lines[i];
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_tab(line);
    if (fields.size() != 5) {
      throw ParseError(trace_path, i + 1, "expected 5 tab-separated fields");
    }
    std::size_t ctx = 0;
    std::size_t pos = 0;
    try {
      ctx = std::stoull(std::string(fields[0]));
      pos = std::stoull(std::string(fields[1]));
    } catch (const std::exception&) {
      throw ParseError(trace_path, i + 1, "bad context/position index");
    }
    if (ctx >= corpus.contexts.size() || pos >= tokens[ctx].size()) {
      throw ValidationError(trace_path + ":" + std::to_string(i + 1) +
                            ": trace entry outside the corpus");
    }
    if (tokens[ctx][pos] != fields[4]) {
      throw ValidationError(trace_path + ":" + std::to_string(i + 1) +
                            ": trace token disagrees with corpus");
    }
    const std::size_t slot = slot_of(corpus.languages, std::string(fields[3]));
    if (slot >= corpus.languages.size()) {
      throw ValidationError(trace_path + ":" + std::to_string(i + 1) +
                            ": unknown language: " + std::string(fields[3]));
    }
    ++corpus.line_tokens[ctx][slot];
    ++attributed;
  }
  std::uint64_t expected = 0;
  for (const auto& t : tokens) expected += t.size();
  if (attributed != expected) {
    throw ValidationError(trace_path + ": trace attributes " + std::to_string(attributed) +
                          " tokens, corpus has " + std::to_string(expected));
  }
  refresh_totals(corpus);
  return corpus;
}

TaggedCorpus from_synthetic(const SyntheticCorpus& corpus) {
  TaggedCorpus out;
  out.source = CorpusSource::synthetic;
  out.languages = {corpus.languages[0], corpus.languages[1]};
  out.contexts = corpus.contexts;
  out.line_tokens = corpus.line_tokens;
  out.token_counts = corpus.token_counts;
  return out;
}

void save_corpus(const TaggedCorpus& corpus, const std::string& path) {
  write_lines(path, corpus.contexts);
}

std::vector<std::uint64_t> count_tokens(const TaggedCorpus& corpus) {
  std::array<std::uint64_t, 2> attributed{0, 0};
  std::uint64_t recounted = 0;
  for (std::size_t i = 0; i < corpus.contexts.size(); ++i) {
    const std::uint64_t n = count_ws_tokens(corpus.contexts[i]);
    const std::uint64_t a = corpus.line_tokens[i][0] + corpus.line_tokens[i][1];
    if (n != a) {
      throw ValidationError("token attribution mismatch at context " + std::to_string(i) +
                            ": " + std::to_string(n) + " tokens, " + std::to_string(a) +
                            " attributed");
    }
    recounted += n;
    attributed[0] += corpus.line_tokens[i][0];
    attributed[1] += corpus.line_tokens[i][1];
  }
  if (attributed != corpus.token_counts) {
    throw ValidationError("stored token_counts stale (recount " +
                          std::to_string(attributed[0] + attributed[1]) + " vs " +
                          std::to_string(corpus.total_tokens()) + ")");
  }
  (void)recounted;
  std::vector<std::uint64_t> out(corpus.languages.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = attributed[i];
  return out;
}

TaggedCorpus truncate_to_budget(const TaggedCorpus& corpus, std::uint64_t budget,
                                std::uint64_t seed) {
  if (budget > corpus.total_tokens()) {
    throw RangeError("budget " + std::to_string(budget) + " exceeds corpus size " +
                     std::to_string(corpus.total_tokens()));
  }
  std::vector<std::size_t> order(corpus.contexts.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  TaggedCorpus out;
  out.source = corpus.source;
  out.languages = corpus.languages;
  std::uint64_t cum = 0;
  for (std::size_t idx : order) {
    const std::uint64_t len = corpus.line_tokens[idx][0] + corpus.line_tokens[idx][1];
    if (cum + len > budget) break;
    out.contexts.push_back(corpus.contexts[idx]);
    out.line_tokens.push_back(corpus.line_tokens[idx]);
    cum += len;
  }
  refresh_totals(out);
  return out;
}

TaggedCorpus merge_shuffle(const std::vector<TaggedCorpus>& corpora, std::uint64_t seed) {
  if (corpora.empty()) throw ConfigError("merge_shuffle needs at least one corpus");

  TaggedCorpus out;
  bool all_natural = true;
  bool all_synthetic = true;
  for (const auto& c : corpora) {
    all_natural = all_natural && c.source == CorpusSource::natural;
    all_synthetic = all_synthetic && c.source == CorpusSource::synthetic;
    for (const auto& lang : c.languages) {
      if (slot_of(out.languages, lang) == out.languages.size()) {
        if (out.languages.size() == 2) {
          throw ValidationError("merge would span more than two languages");
        }
        out.languages.push_back(lang);
      }
    }
  }
  out.source = all_natural ? CorpusSource::natural
                           : (all_synthetic ? CorpusSource::synthetic : CorpusSource::mixed);

  for (const auto& c : corpora) {
    std::array<std::size_t, 2> remap{0, 0};
    for (std::size_t i = 0; i < c.languages.size(); ++i) {
      remap[i] = slot_of(out.languages, c.languages[i]);
    }
    for (std::size_t i = 0; i < c.contexts.size(); ++i) {
      out.contexts.push_back(c.contexts[i]);
      std::array<std::uint32_t, 2> lt{0, 0};
      for (std::size_t s = 0; s < c.languages.size(); ++s) {
        lt[remap[s]] += c.line_tokens[i][s];
      }
      out.line_tokens.push_back(lt);
    }
  }

  std::vector<std::size_t> order(out.contexts.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<std::string> contexts(out.contexts.size());
  std::vector<std::array<std::uint32_t, 2>> line_tokens(out.contexts.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    contexts[i] = std::move(out.contexts[order[i]]);
    line_tokens[i] = out.line_tokens[order[i]];
  }
  out.contexts = std::move(contexts);
  out.line_tokens = std::move(line_tokens);
  refresh_totals(out);
  return out;
}

HybridResult build_hybrid(const TaggedCorpus& natural_a, const TaggedCorpus& natural_b,
                          const TaggedCorpus& synthetic, const BalanceSpec& spec,
                          std::uint64_t seed) {
  check_spec(spec);
  if (natural_a.languages.size() != 1 || natural_b.languages.size() != 1 ||
      natural_a.languages[0] == natural_b.languages[0]) {
    throw ConfigError("build_hybrid needs two monolingual natural corpora in distinct languages");
  }
  const std::string& lang_a = natural_a.languages[0];
  const std::string& lang_b = natural_b.languages[0];
  if (slot_of(synthetic.languages, lang_a) == synthetic.languages.size() ||
      slot_of(synthetic.languages, lang_b) == synthetic.languages.size()) {
    throw ConfigError("synthetic corpus does not cover languages " + lang_a + "/" + lang_b);
  }

  const std::uint64_t total = spec.total_tokens;
  const std::uint64_t syn_budget = rounded_share(total, spec.source_share[1]);
  if (synthetic.total_tokens() < syn_budget) {
    throw ConfigError("budget infeasible: synthetic source has " +
                      std::to_string(synthetic.total_tokens()) + " tokens, cell needs " +
                      std::to_string(syn_budget));
  }
  const TaggedCorpus syn_cut =
      truncate_to_budget(synthetic, syn_budget, splitmix_seed(seed, 0));

  const std::uint64_t syn_a = syn_cut.tokens_for(lang_a);
  const std::uint64_t syn_b = syn_cut.tokens_for(lang_b);
  const std::uint64_t slack =
      static_cast<std::uint64_t>(std::ceil(spec.tolerance * static_cast<double>(total)));

  std::array<std::uint64_t, 2> nat_target{};
  const std::array<std::uint64_t, 2> lang_budget{rounded_share(total, spec.language_share[0]),
                                                 rounded_share(total, spec.language_share[1])};
  const std::array<std::uint64_t, 2> syn_lang{syn_a, syn_b};
  const std::array<const TaggedCorpus*, 2> naturals{&natural_a, &natural_b};
  const std::array<std::string, 2> langs{lang_a, lang_b};
  for (std::size_t i = 0; i < 2; ++i) {
    if (syn_lang[i] > lang_budget[i]) {
      if (syn_lang[i] - lang_budget[i] > slack) {
        throw ConfigError("budget infeasible: synthetic tokens in " + langs[i] + " (" +
                          std::to_string(syn_lang[i]) + ") exceed the language budget " +
                          std::to_string(lang_budget[i]));
      }
      nat_target[i] = 0;
    } else {
      nat_target[i] = lang_budget[i] - syn_lang[i];
    }
    if (naturals[i]->total_tokens() < nat_target[i]) {
      throw ConfigError("budget infeasible: natural " + langs[i] + " corpus has " +
                        std::to_string(naturals[i]->total_tokens()) + " tokens, cell needs " +
                        std::to_string(nat_target[i]));
    }
  }

  const TaggedCorpus nat_a_cut =
      truncate_to_budget(natural_a, nat_target[0], splitmix_seed(seed, 1));
  const TaggedCorpus nat_b_cut =
      truncate_to_budget(natural_b, nat_target[1], splitmix_seed(seed, 2));

  HybridResult result;
  result.accounting.languages = {lang_a, lang_b};
  result.accounting.tokens[0] = {nat_a_cut.total_tokens(), syn_a};
  result.accounting.tokens[1] = {nat_b_cut.total_tokens(), syn_b};

  result.corpus = merge_shuffle({nat_a_cut, nat_b_cut, syn_cut}, splitmix_seed(seed, 3));

  const auto& acc = result.accounting.tokens;
  check_within("language " + lang_a, acc[0][0] + acc[0][1], lang_budget[0], slack);
  check_within("language " + lang_b, acc[1][0] + acc[1][1], lang_budget[1], slack);
  check_within("natural source", acc[0][0] + acc[1][0],
               rounded_share(total, spec.source_share[0]), slack);
  check_within("synthetic source", acc[0][1] + acc[1][1], syn_budget, slack);
  return result;
}

HybridResult build_hybrid_mono(const TaggedCorpus& natural, const TaggedCorpus& synthetic,
                               std::uint64_t total_tokens,
                               std::array<double, 2> source_share, double tolerance,
                               std::uint64_t seed) {
  if (natural.languages.size() != 1) {
    throw ConfigError("build_hybrid_mono needs a monolingual natural corpus");
  }
  const std::string& lang = natural.languages[0];
  if (synthetic.tokens_for(lang) != synthetic.total_tokens()) {
    throw ConfigError("synthetic corpus is not monolingual in " + lang);
  }
  BalanceSpec spec;
  spec.total_tokens = total_tokens;
  spec.language_share = {1.0, 0.0};
  spec.source_share = source_share;
  spec.tolerance = tolerance;
  check_spec(spec);

  const std::uint64_t syn_budget = rounded_share(total_tokens, source_share[1]);
  const std::uint64_t nat_budget = total_tokens - syn_budget;
  if (synthetic.total_tokens() < syn_budget) {
    throw ConfigError("budget infeasible: synthetic source has " +
                      std::to_string(synthetic.total_tokens()) + " tokens, cell needs " +
                      std::to_string(syn_budget));
  }
  if (natural.total_tokens() < nat_budget) {
    throw ConfigError("budget infeasible: natural " + lang + " corpus has " +
                      std::to_string(natural.total_tokens()) + " tokens, cell needs " +
                      std::to_string(nat_budget));
  }
  const TaggedCorpus syn_cut = truncate_to_budget(synthetic, syn_budget, splitmix_seed(seed, 0));
  const TaggedCorpus nat_cut = truncate_to_budget(natural, nat_budget, splitmix_seed(seed, 1));

  HybridResult result;
  result.accounting.languages = {lang, ""};
  result.accounting.tokens[0] = {nat_cut.total_tokens(), syn_cut.total_tokens()};
  result.corpus = merge_shuffle({nat_cut, syn_cut}, splitmix_seed(seed, 3));

  const std::uint64_t slack =
      static_cast<std::uint64_t>(std::ceil(tolerance * static_cast<double>(total_tokens)));
  check_within("natural source", result.accounting.tokens[0][0], nat_budget, slack);
  check_within("synthetic source", result.accounting.tokens[0][1], syn_budget, slack);
  return result;
}

void write_accounting(const HybridAccounting& accounting, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << "language\tnatural\tsynthetic\n";
  for (std::size_t i = 0; i < 2; ++i) {
    if (accounting.languages[i].empty()) continue;
    out << accounting.languages[i] << '\t' << accounting.tokens[i][0] << '\t'
        << accounting.tokens[i][1] << '\n';
  }
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace biwalk
