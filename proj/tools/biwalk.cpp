// biwalk: bilingual embeddings from knowledge-base random walks.
//
// Subcommands: walk, merge, hybrid, constraints, train, map, eval, pipeline.
// Exit codes: 0 ok, 1 usage, 2 data error, 3 numeric failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biwalk/constraints.hpp"
#include "biwalk/corpus.hpp"
#include "biwalk/embed.hpp"
#include "biwalk/errors.hpp"
#include "biwalk/eval.hpp"
#include "biwalk/kb_graph.hpp"
#include "biwalk/mapping.hpp"
#include "biwalk/pipeline.hpp"
#include "biwalk/text.hpp"
#include "biwalk/vectors.hpp"
#include "biwalk/walker.hpp"

namespace {

using namespace biwalk;

int default_threads() {
  if (const char* env = std::getenv("BIWALK_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

std::array<std::string, 2> parse_language_pair(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == spec.size()) {
    throw ConfigError("expected --languages A,B, got: " + spec);
  }
  return {spec.substr(0, comma), spec.substr(comma + 1)};
}

// "lang=path" option values for tagged corpus inputs.
std::pair<std::string, std::string> parse_tagged(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ConfigError("expected LANG=PATH, got: " + spec);
  }
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

struct WalkArgs {
  std::string graph;
  std::string lexicon;
  std::string languages;
  std::string mode = "bi";
  double alpha = 0.85;
  std::uint64_t contexts = 0;
  std::optional<std::uint64_t> target_tokens;
  std::uint64_t seed = 1;
  int threads = default_threads();
  std::string out;
  std::string trace;
};

int cmd_walk(const WalkArgs& args) {
  const auto langs = parse_language_pair(args.languages);
  const KnowledgeGraph graph = load_graph(args.graph);
  const Lexicon lexicon = load_lexicon(args.lexicon, graph, langs);

  WalkConfig config;
  config.alpha = args.alpha;
  config.contexts = args.contexts;
  config.target_tokens = args.target_tokens;
  config.seed = args.seed;
  config.workers = args.threads;
  if (args.mode == "bi") {
    config.mode = WalkModeKind::bilingual;
  } else if (args.mode.rfind("mono:", 0) == 0) {
    config.mode = WalkModeKind::monolingual;
    config.language = args.mode.substr(5);
  } else {
    throw ConfigError("mode must be `bi` or `mono:<lang>`, got: " + args.mode);
  }

  const bool want_trace = !args.trace.empty();
  const SyntheticCorpus corpus =
      want_trace ? walk_trace(graph, lexicon, config)
                 : (config.mode == WalkModeKind::bilingual ? bi_walks(graph, lexicon, config)
                                                           : mono_walks(graph, lexicon, config));
  write_corpus(corpus, args.out);
  if (want_trace) write_trace(corpus, graph, lexicon, args.trace);
  std::cerr << "walk: " << corpus.contexts.size() << " contexts, "
            << corpus.token_counts[0] << " " << langs[0] << " + " << corpus.token_counts[1]
            << " " << langs[1] << " tokens -> " << args.out << "\n";
  return 0;
}

struct MergeArgs {
  std::vector<std::string> inputs;  // LANG=PATH
  std::string synthetic;            // bilingual synthetic corpus
  std::string trace;
  std::string languages;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_merge(const MergeArgs& args) {
  std::vector<TaggedCorpus> corpora;
  for (const auto& spec : args.inputs) {
    const auto [lang, path] = parse_tagged(spec);
    corpora.push_back(load_natural_corpus(path, lang));
  }
  if (!args.synthetic.empty()) {
    if (args.trace.empty() || args.languages.empty()) {
      throw ConfigError("--synthetic needs --trace and --languages for attribution");
    }
    corpora.push_back(
        load_synthetic_corpus(args.synthetic, args.trace, parse_language_pair(args.languages)));
  }
  if (corpora.empty()) throw ConfigError("no input corpora");
  const TaggedCorpus merged = merge_shuffle(corpora, args.seed);
  save_corpus(merged, args.out);
  std::cerr << "merge: " << merged.contexts.size() << " contexts, "
            << merged.total_tokens() << " tokens -> " << args.out << "\n";
  return 0;
}

struct HybridArgs {
  std::vector<std::string> naturals;  // LANG=PATH, one or two
  std::string synthetic;
  std::string trace;
  std::string languages;
  std::string synthetic_lang;  // monolingual synthetic corpus
  std::uint64_t budget = 0;
  double lang_share = 0.5;
  double source_share = 0.5;
  double tolerance = 0.01;
  std::uint64_t seed = 1;
  std::string out;
  std::string accounting;
};

int cmd_hybrid(const HybridArgs& args) {
  if (args.naturals.empty() || args.naturals.size() > 2) {
    throw ConfigError("hybrid needs one (mono) or two (bilingual) --natural inputs");
  }
  HybridResult result;
  if (args.naturals.size() == 2) {
    const auto [lang_a, path_a] = parse_tagged(args.naturals[0]);
    const auto [lang_b, path_b] = parse_tagged(args.naturals[1]);
    if (args.synthetic.empty() || args.trace.empty()) {
      throw ConfigError("bilingual hybrid needs --synthetic and --trace");
    }
    BalanceSpec spec;
    spec.total_tokens = args.budget;
    spec.language_share = {args.lang_share, 1.0 - args.lang_share};
    spec.source_share = {1.0 - args.source_share, args.source_share};
    spec.tolerance = args.tolerance;
    result = build_hybrid(load_natural_corpus(path_a, lang_a),
                          load_natural_corpus(path_b, lang_b),
                          load_synthetic_corpus(args.synthetic, args.trace, {lang_a, lang_b}),
                          spec, args.seed);
  } else {
    const auto [lang, path] = parse_tagged(args.naturals[0]);
    if (args.synthetic.empty()) throw ConfigError("hybrid needs --synthetic");
    result = build_hybrid_mono(load_natural_corpus(path, lang),
                               load_synthetic_corpus(args.synthetic, lang), args.budget,
                               {1.0 - args.source_share, args.source_share}, args.tolerance,
                               args.seed);
  }
  save_corpus(result.corpus, args.out);
  if (!args.accounting.empty()) write_accounting(result.accounting, args.accounting);
  std::cerr << "hybrid: " << result.corpus.total_tokens() << " tokens -> " << args.out << "\n";
  return 0;
}

struct ConstraintsArgs {
  std::string graph;
  std::string lexicon;
  std::string languages;
  bool bilingual_only = false;
  std::string out;
};

int cmd_constraints(const ConstraintsArgs& args) {
  const KnowledgeGraph graph = load_graph(args.graph);
  const Lexicon lexicon = load_lexicon(args.lexicon, graph, parse_language_pair(args.languages));
  ConstraintSet cs = mine_constraints(lexicon);
  if (args.bilingual_only) cs = cs.bilingual_only();
  save_constraints(cs, args.out);
  std::cerr << "constraints: " << cs.size() << " pairs (" << cs.bilingual_count()
            << " bilingual) -> " << args.out << "\n";
  return 0;
}

struct TrainArgs {
  std::string corpus;
  std::string constraints;
  std::string out = "model";
  int dim = 300;
  int window = 5;
  int negatives = 5;
  double lambda = 0.01;
  double subsample = 0.0;
  double learning_rate = 0.025;
  double noise_power = 0.75;
  int epochs = 5;
  std::uint32_t min_count = 1;
  bool fixed_window = false;
  std::uint64_t seed = 1;
  int threads = default_threads();
};

int cmd_train(const TrainArgs& args) {
  const std::vector<std::string> contexts = read_lines(args.corpus);
  const Vocabulary vocab = build_vocab(contexts, args.min_count);

  Hyperparams hp;
  hp.dim = args.dim;
  hp.window = args.window;
  hp.negatives = args.negatives;
  hp.lambda = args.lambda;
  hp.subsample = args.subsample;
  hp.learning_rate = args.learning_rate;
  hp.noise_power = args.noise_power;
  hp.epochs = args.epochs;
  hp.fixed_window = args.fixed_window;
  hp.seed = args.seed;
  hp.workers = args.threads;

  std::optional<ConstraintSet> cs;
  if (!args.constraints.empty()) cs = load_constraints(args.constraints);

  TrainStats stats;
  const EmbeddingModel model =
      train(contexts, vocab, cs ? &cs.value() : nullptr, hp, &stats);
  save_model(model, args.out);
  save_vectors(model.wc_table(), args.out + ".wc.vec");
  std::cerr << "train: |V|=" << vocab.size() << ", " << stats.pair_updates << " pair updates, "
            << stats.constraint_updates << " constraint updates -> " << args.out
            << ".{w,c,wc}.vec\n";
  if (cs) {
    std::cerr << "train: constraints matched " << stats.constraint_pairs_used << ", dropped "
              << stats.constraint_pairs_dropped << " (out of vocabulary)\n";
  }
  return 0;
}

struct MapArgs {
  std::string src;
  std::string tgt;
  std::string dict;
  std::string out;
};

int cmd_map(const MapArgs& args) {
  const PreprocessedTable src = preprocess(load_vectors(args.src));
  const PreprocessedTable tgt = preprocess(load_vectors(args.tgt));

  std::vector<std::pair<std::string, std::string>> dictionary;
  const auto lines = read_lines(args.dict);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    const auto fields = split_tab(lines[i]);
    if (fields.size() != 2) throw ParseError(args.dict, i + 1, "expected `source<TAB>target`");
    dictionary.emplace_back(fold_case(fields[0]), fold_case(fields[1]));
  }

  FitInfo info;
  const LinearMap map = fit_orthogonal({src, tgt, dictionary}, &info);
  save_map(map, args.out);
  std::cerr << "map: fit on " << info.used_pairs << " pairs (" << info.dropped_pairs
            << " dropped)";
  if (info.underdetermined) std::cerr << " [warning: fewer pairs than dimensions]";
  std::cerr << " -> " << args.out << "\n";
  return 0;
}

struct EvalArgs {
  std::string model;
  std::string map;
  std::string src;
  std::string tgt;
  std::string src_lang;
  std::string tgt_lang;
  std::string dataset;
  std::string report;
  bool oov_midpoint = false;
};

int cmd_eval(const EvalArgs& args) {
  const SimilarityDataset dataset = load_dataset(args.dataset);
  const OovPolicy policy = args.oov_midpoint ? OovPolicy::midpoint : OovPolicy::exclude;
  EvalReport report;
  if (!args.map.empty()) {
    if (args.src.empty() || args.tgt.empty() || args.src_lang.empty() || args.tgt_lang.empty()) {
      throw ConfigError("mapped eval needs --src, --tgt, --src-lang and --tgt-lang");
    }
    const PreprocessedTable src = preprocess(load_vectors(args.src));
    const PreprocessedTable tgt = preprocess(load_vectors(args.tgt));
    report = score_pairs_mapped(load_map(args.map), src, tgt, args.src_lang, args.tgt_lang,
                                dataset, policy);
  } else {
    if (args.model.empty()) throw ConfigError("eval needs --model (or --map with --src/--tgt)");
    report = score_pairs(load_vectors(args.model), dataset, policy);
  }
  if (!args.report.empty()) write_report_json(report, args.report);
  std::cout << "spearman " << report.rho << " covered " << report.covered_pairs << " oov "
            << report.oov_pairs << "\n";
  return 0;
}

struct DatasetArgs {
  std::string in_a;
  std::string in_b;
  std::string out;
};

int cmd_dataset(const DatasetArgs& args) {
  const auto [lang_a, path_a] = parse_tagged(args.in_a);
  const auto [lang_b, path_b] = parse_tagged(args.in_b);
  const MonolingualDataset a = load_monolingual_dataset(path_a, lang_a);
  const MonolingualDataset b = load_monolingual_dataset(path_b, lang_b);
  const CrossLingualBuild built = build_crosslingual(a, b);
  save_dataset(built.dataset, args.out);
  std::cerr << "dataset: " << built.dataset.pairs.size() << " cross-lingual pairs ("
            << built.skipped_ids << " unaligned ids skipped) -> " << args.out << "\n";
  return 0;
}

struct PipelineArgs {
  std::string config;
  std::vector<std::string> overrides;
};

int cmd_pipeline(const PipelineArgs& args) {
  const PipelineConfig config = load_pipeline_config(args.config, args.overrides);
  const PipelineResult result = run_pipeline(config);
  std::cout << "pipeline ok: spearman " << result.report.rho << " covered "
            << result.report.covered_pairs << " oov " << result.report.oov_pairs
            << " manifest " << result.manifest_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bilingual word embeddings from multilingual wordnet random walks"};
  app.require_subcommand(1);

  WalkArgs walk_args;
  auto* walk = app.add_subcommand("walk", "generate a random-walk synthetic corpus");
  walk->add_option("--graph", walk_args.graph, "edge TSV")->required();
  walk->add_option("--lexicon", walk_args.lexicon, "lexicon TSV")->required();
  walk->add_option("--languages", walk_args.languages, "language pair A,B")->required();
  walk->add_option("--mode", walk_args.mode, "bi or mono:<lang> (default bi)");
  walk->add_option("--alpha", walk_args.alpha, "damping factor (default 0.85)");
  walk->add_option("--contexts", walk_args.contexts, "number of synthetic contexts");
  walk->add_option("--target-tokens", walk_args.target_tokens,
                   "stop at this token budget instead of --contexts");
  walk->add_option("--seed", walk_args.seed, "RNG seed");
  walk->add_option("--threads", walk_args.threads, "worker threads (env BIWALK_THREADS)");
  walk->add_option("--out", walk_args.out, "output corpus")->required();
  walk->add_option("--trace", walk_args.trace, "sidecar trace TSV");

  MergeArgs merge_args;
  auto* merge = app.add_subcommand("merge", "merge and shuffle corpora at sentence level");
  merge->add_option("--in", merge_args.inputs, "natural corpus as LANG=PATH (repeatable)");
  merge->add_option("--synthetic", merge_args.synthetic, "bilingual synthetic corpus");
  merge->add_option("--trace", merge_args.trace, "trace TSV for --synthetic");
  merge->add_option("--languages", merge_args.languages, "language pair A,B for --synthetic");
  merge->add_option("--seed", merge_args.seed, "RNG seed");
  merge->add_option("--out", merge_args.out, "output corpus")->required();

  HybridArgs hybrid_args;
  auto* hybrid = app.add_subcommand("hybrid", "balance natural and synthetic corpora");
  hybrid->add_option("--natural", hybrid_args.naturals, "natural corpus as LANG=PATH");
  hybrid->add_option("--synthetic", hybrid_args.synthetic, "synthetic corpus");
  hybrid->add_option("--trace", hybrid_args.trace, "trace TSV (bilingual synthetic)");
  hybrid->add_option("--budget", hybrid_args.budget, "total token budget")->required();
  hybrid->add_option("--lang-share", hybrid_args.lang_share,
                     "share of the first language (default 0.5)");
  hybrid->add_option("--source-share", hybrid_args.source_share,
                     "synthetic token share (default 0.5)");
  hybrid->add_option("--tolerance", hybrid_args.tolerance, "relative slack (default 0.01)");
  hybrid->add_option("--seed", hybrid_args.seed, "RNG seed");
  hybrid->add_option("--out", hybrid_args.out, "output corpus")->required();
  hybrid->add_option("--accounting", hybrid_args.accounting, "accounting matrix TSV");

  ConstraintsArgs constraints_args;
  auto* constraints = app.add_subcommand("constraints", "mine synonym/translation pairs");
  constraints->add_option("--graph", constraints_args.graph, "edge TSV")->required();
  constraints->add_option("--lexicon", constraints_args.lexicon, "lexicon TSV")->required();
  constraints->add_option("--languages", constraints_args.languages, "language pair A,B")
      ->required();
  constraints->add_flag("--bilingual-only", constraints_args.bilingual_only,
                        "keep only translation pairs");
  constraints->add_option("--out", constraints_args.out, "output TSV")->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train skipgram with negative sampling");
  train->add_option("--corpus", train_args.corpus, "training corpus")->required();
  train->add_option("--constraints", train_args.constraints, "constraint TSV");
  train->add_option("--out", train_args.out, "output base name (default model)");
  train->add_option("--dim", train_args.dim, "dimensionality (default 300)");
  train->add_option("--window", train_args.window, "window size (default 5)");
  train->add_option("--neg", train_args.negatives, "negative samples (default 5)");
  train->add_option("--lambda", train_args.lambda, "regularization coefficient (default 0.01)");
  train->add_option("--subsample", train_args.subsample, "subsample threshold (default 0)");
  train->add_option("--lr", train_args.learning_rate, "initial learning rate (default 0.025)");
  train->add_option("--noise-power", train_args.noise_power,
                    "noise distribution exponent (default 0.75)");
  train->add_option("--epochs", train_args.epochs, "training epochs (default 5)");
  train->add_option("--min-count", train_args.min_count, "vocabulary floor (default 1)");
  train->add_flag("--fixed-window", train_args.fixed_window,
                  "use the full window instead of sampling [1,K]");
  train->add_option("--seed", train_args.seed, "RNG seed");
  train->add_option("--threads", train_args.threads, "worker threads (env BIWALK_THREADS)");

  MapArgs map_args;
  auto* map = app.add_subcommand("map", "fit the orthogonal mapping baseline");
  map->add_option("--src", map_args.src, "source vectors (.vec)")->required();
  map->add_option("--tgt", map_args.tgt, "target vectors (.vec)")->required();
  map->add_option("--dict", map_args.dict, "dictionary TSV source<TAB>target")->required();
  map->add_option("--out", map_args.out, "output map (DxD text matrix)")->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "cross-lingual word similarity evaluation");
  eval->add_option("--model", eval_args.model, "joint vectors (.vec)");
  eval->add_option("--map", eval_args.map, "mapping matrix (mapped eval)");
  eval->add_option("--src", eval_args.src, "source vectors for --map");
  eval->add_option("--tgt", eval_args.tgt, "target vectors for --map");
  eval->add_option("--src-lang", eval_args.src_lang, "language of --src");
  eval->add_option("--tgt-lang", eval_args.tgt_lang, "language of --tgt");
  eval->add_option("--dataset", eval_args.dataset, "similarity TSV")->required();
  eval->add_option("--report", eval_args.report, "JSON report path");
  eval->add_flag("--oov-midpoint", eval_args.oov_midpoint,
                 "score OOV pairs at the cosine midpoint instead of excluding them");

  DatasetArgs dataset_args;
  auto* dataset = app.add_subcommand(
      "dataset", "combine two id-aligned monolingual similarity datasets");
  dataset->add_option("--in-a", dataset_args.in_a, "first dataset as LANG=PATH")->required();
  dataset->add_option("--in-b", dataset_args.in_b, "second dataset as LANG=PATH")->required();
  dataset->add_option("--out", dataset_args.out, "output cross-lingual TSV")->required();

  PipelineArgs pipeline_args;
  auto* pipeline = app.add_subcommand("pipeline", "run a full variant x source pipeline");
  pipeline->add_option("--config", pipeline_args.config, "JSON pipeline config")->required();
  pipeline->add_option("--set", pipeline_args.overrides,
                       "override config keys, e.g. --set train.dim=100 (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (walk->parsed()) return cmd_walk(walk_args);
    if (merge->parsed()) return cmd_merge(merge_args);
    if (hybrid->parsed()) return cmd_hybrid(hybrid_args);
    if (constraints->parsed()) return cmd_constraints(constraints_args);
    if (train->parsed()) return cmd_train(train_args);
    if (map->parsed()) return cmd_map(map_args);
    if (eval->parsed()) return cmd_eval(eval_args);
    if (dataset->parsed()) return cmd_dataset(dataset_args);
    if (pipeline->parsed()) return cmd_pipeline(pipeline_args);
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
