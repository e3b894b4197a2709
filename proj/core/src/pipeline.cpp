#include "biwalk/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "biwalk/constraints.hpp"
#include "biwalk/corpus.hpp"
#include "biwalk/errors.hpp"
#include "biwalk/kb_graph.hpp"
#include "biwalk/mapping.hpp"
#include "biwalk/rng.hpp"
#include "biwalk/text.hpp"
#include "biwalk/walker.hpp"

namespace biwalk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Stage seed streams, derived from the pipeline seed.
enum SeedStream : std::uint64_t {
  kSeedWalkBi = 0x01,
  kSeedWalkMonoA = 0x02,
  kSeedWalkMonoB = 0x03,
  kSeedTruncateA = 0x04,
  kSeedTruncateB = 0x05,
  kSeedMerge = 0x06,
  kSeedHybrid = 0x07,
  kSeedHybridMonoA = 0x08,
  kSeedHybridMonoB = 0x09,
  kSeedTrainJoint = 0x0A,
  kSeedTrainA = 0x0B,
  kSeedTrainB = 0x0C,
};

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class ManifestBuilder {
 public:
  explicit ManifestBuilder(const PipelineConfig& config) {
    doc_["status"] = "running";
    doc_["variant"] = to_string(config.variant);
    doc_["source"] = to_string(config.source);
    doc_["languages"] = {config.languages[0], config.languages[1]};
    doc_["seed"] = config.seed;
    doc_["threads"] = config.threads;
    doc_["stages"] = json::array();
    doc_["inputs"] = json::object();
    doc_["outputs"] = json::object();
    doc_["metrics"] = json::object();
  }

  void input(const std::string& name, const std::string& path) {
    doc_["inputs"][name] = {{"path", path}, {"fnv64", hex64(fnv1a64_file(path))}};
  }

  void output(const std::string& name, const std::string& path) {
    doc_["outputs"][name] = {{"path", path}, {"fnv64", hex64(fnv1a64_file(path))},
                             {"partial", false}};
  }

  void stage_done(const std::string& name) { doc_["stages"].push_back(name); }

  void metric(const std::string& key, const json& value) { doc_["metrics"][key] = value; }

  void eval(const EvalReport& report) {
    doc_["eval"] = {{"spearman", report.rho},
                    {"covered_pairs", report.covered_pairs},
                    {"oov_pairs", report.oov_pairs}};
  }

  void write_ok(const std::string& path) {
    doc_["status"] = "ok";
    write(path);
  }

  void write_failed(const std::string& path, const std::string& stage,
                    const std::string& error) {
    doc_["status"] = "failed";
    doc_["failed_stage"] = stage;
    doc_["error"] = error;
    for (auto& [name, out] : doc_["outputs"].items()) {
      out["partial"] = true;
    }
    write(path);
  }

 private:
  void write(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << doc_.dump(2) << '\n';
  }

  json doc_;
};

json accounting_json(const HybridAccounting& acc) {
  json rows = json::object();
  for (std::size_t i = 0; i < 2; ++i) {
    if (acc.languages[i].empty()) continue;
    rows[acc.languages[i]] = {{"natural", acc.tokens[i][0]}, {"synthetic", acc.tokens[i][1]}};
  }
  return rows;
}

struct Stage {
  ManifestBuilder& manifest;
  std::string name;
  std::string* current;

  Stage(ManifestBuilder& m, std::string n, std::string* cur)
      : manifest(m), name(std::move(n)), current(cur) {
    *current = name;
  }
  void done() { manifest.stage_done(name); }
};

WalkConfig make_walk_config(const PipelineConfig& config, WalkModeKind mode,
                            const std::string& language, std::uint64_t stream,
                            std::optional<std::uint64_t> token_budget) {
  WalkConfig wc;
  wc.alpha = config.alpha;
  wc.seed = splitmix_seed(config.seed, stream);
  wc.mode = mode;
  wc.language = language;
  wc.workers = config.threads;
  if (token_budget) {
    wc.target_tokens = token_budget;
  } else if (config.walk_target_tokens) {
    wc.target_tokens = config.walk_target_tokens;
  } else {
    wc.contexts = config.walk_contexts;
  }
  return wc;
}

Hyperparams make_train_params(const PipelineConfig& config, std::uint64_t stream) {
  Hyperparams hp = config.train;
  hp.seed = splitmix_seed(config.seed, stream);
  hp.workers = config.threads;
  return hp;
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::map: return "map";
    case Variant::joint: return "joint";
    case Variant::jointc: return "jointc";
  }
  return "?";
}

std::string to_string(SourceKind s) {
  switch (s) {
    case SourceKind::txt: return "txt";
    case SourceKind::kb: return "kb";
    case SourceKind::hyb: return "hyb";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "map") return Variant::map;
  if (s == "joint") return Variant::joint;
  if (s == "jointc") return Variant::jointc;
  throw ConfigError("unknown variant: " + s + " (expected map|joint|jointc)");
}

SourceKind source_from_string(const std::string& s) {
  if (s == "txt") return SourceKind::txt;
  if (s == "kb") return SourceKind::kb;
  if (s == "hyb") return SourceKind::hyb;
  throw ConfigError("unknown source: " + s + " (expected txt|kb|hyb)");
}

PipelineConfig load_pipeline_config(const std::string& json_path,
                                    const std::vector<std::string>& overrides) {
  std::ifstream in(json_path, std::ios::binary);
  if (!in) throw ParseError("cannot open config: " + json_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(json_path + ": " + e.what());
  }

  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be KEY=VALUE: " + ov);
    const std::string key = ov.substr(0, eq);
    const std::string value = ov.substr(eq + 1);
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
      const std::size_t dot = key.find('.', start);
      const std::string part = key.substr(start, dot - start);
      if (dot == std::string::npos) {
        json parsed;
        try {
          parsed = json::parse(value);
        } catch (const json::exception&) {
          parsed = value;  // plain string
        }
        (*node)[part] = parsed;
        break;
      }
      node = &(*node)[part];
      start = dot + 1;
    }
  }

  PipelineConfig config;
  try {
    config.variant = variant_from_string(doc.at("variant").get<std::string>());
    config.source = source_from_string(doc.at("source").get<std::string>());
    const auto langs = doc.at("languages");
    if (!langs.is_array() || langs.size() != 2) {
      throw ConfigError("languages must be a two-element array");
    }
    config.languages = {langs[0].get<std::string>(), langs[1].get<std::string>()};
    config.dataset_path = doc.at("dataset").get<std::string>();
    config.out_dir = doc.at("out_dir").get<std::string>();

    config.graph_path = doc.value("graph", "");
    config.lexicon_path = doc.value("lexicon", "");
    config.constraints_path = doc.value("constraints", "");
    if (doc.contains("natural")) {
      const auto& nat = doc.at("natural");
      for (std::size_t i = 0; i < 2; ++i) {
        if (nat.contains(config.languages[i])) {
          config.natural_paths[i] = nat.at(config.languages[i]).get<std::string>();
        }
      }
    }
    config.seed = doc.value("seed", std::uint64_t{1});
    config.threads = doc.value("threads", 1);

    if (doc.contains("walk")) {
      const auto& w = doc.at("walk");
      config.alpha = w.value("alpha", 0.85);
      config.walk_contexts = w.value("contexts", std::uint64_t{0});
      if (w.contains("target_tokens") && !w.at("target_tokens").is_null()) {
        config.walk_target_tokens = w.at("target_tokens").get<std::uint64_t>();
      }
      config.walk_trace_output = w.value("trace", false);
    }
    if (doc.contains("corpus")) {
      const auto& c = doc.at("corpus");
      if (c.contains("total_tokens") && !c.at("total_tokens").is_null()) {
        config.total_tokens = c.at("total_tokens").get<std::uint64_t>();
      }
      if (c.contains("language_share")) {
        config.language_share = {c.at("language_share")[0].get<double>(),
                                 c.at("language_share")[1].get<double>()};
      }
      if (c.contains("source_share")) {
        config.source_share = {c.at("source_share")[0].get<double>(),
                               c.at("source_share")[1].get<double>()};
      }
      config.tolerance = c.value("tolerance", 0.01);
    }
    if (doc.contains("train")) {
      const auto& t = doc.at("train");
      config.train.dim = t.value("dim", config.train.dim);
      config.train.window = t.value("window", config.train.window);
      config.train.negatives = t.value("negatives", config.train.negatives);
      config.train.subsample = t.value("subsample", config.train.subsample);
      config.train.lambda = t.value("lambda", config.train.lambda);
      config.train.learning_rate = t.value("learning_rate", config.train.learning_rate);
      config.train.epochs = t.value("epochs", config.train.epochs);
      config.train.noise_power = t.value("noise_power", config.train.noise_power);
      config.train.fixed_window = t.value("fixed_window", config.train.fixed_window);
      config.train.constraint_neighbor_cap =
          t.value("constraint_neighbor_cap", config.train.constraint_neighbor_cap);
      config.train.symmetric_constraints =
          t.value("symmetric_constraints", config.train.symmetric_constraints);
      config.min_count = t.value("min_count", config.min_count);
    }
    if (doc.contains("eval")) {
      config.oov_midpoint = doc.at("eval").value("oov_midpoint", false);
    }
    if (doc.contains("map")) {
      config.map_source_language = doc.at("map").value("source_language", "");
    }
  } catch (const json::exception& e) {
    throw ConfigError(json_path + ": " + e.what());
  }
  return config;
}

void validate_pipeline_config(const PipelineConfig& config) {
  if (config.languages[0].empty() || config.languages[1].empty() ||
      config.languages[0] == config.languages[1]) {
    throw ConfigError("two distinct languages are required");
  }
  if (config.dataset_path.empty()) throw ConfigError("dataset is required");
  if (config.out_dir.empty()) throw ConfigError("out_dir is required");
  if (config.threads < 1) throw ConfigError("threads must be >= 1");

  const bool needs_kb = config.source != SourceKind::txt;
  const bool needs_naturals = config.source != SourceKind::kb;
  if (needs_kb && (config.graph_path.empty() || config.lexicon_path.empty())) {
    throw ConfigError(to_string(config.source) + " pipelines need graph and lexicon inputs");
  }
  if (needs_naturals &&
      (config.natural_paths[0].empty() || config.natural_paths[1].empty())) {
    throw ConfigError(to_string(config.source) + " pipelines need a natural corpus per language");
  }
  const bool has_minable_kb = !config.lexicon_path.empty() && !config.graph_path.empty();
  if (config.variant == Variant::jointc && config.constraints_path.empty() && !has_minable_kb) {
    throw ConfigError("jointc needs a constraints file or a graph+lexicon to mine");
  }
  if (config.variant == Variant::map && config.constraints_path.empty() && !has_minable_kb) {
    throw ConfigError("map needs a bilingual dictionary (constraints file or graph+lexicon)");
  }
  if (config.source != SourceKind::txt && !config.walk_target_tokens &&
      config.walk_contexts == 0 && !(config.source == SourceKind::hyb && config.total_tokens)) {
    throw ConfigError("walk stage needs contexts or target_tokens");
  }
  if (config.source == SourceKind::hyb && !config.total_tokens) {
    throw ConfigError("hyb pipelines need corpus.total_tokens");
  }
  if (!config.map_source_language.empty() &&
      config.map_source_language != config.languages[0] &&
      config.map_source_language != config.languages[1]) {
    throw ConfigError("map.source_language must be one of the configured languages");
  }
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  validate_pipeline_config(config);
  fs::create_directories(config.out_dir);
  const auto out_path = [&](const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
  };

  ManifestBuilder manifest(config);
  const std::string manifest_path = out_path("manifest.json");
  std::string current_stage = "setup";

  try {
    // ---- dataset ----
    Stage s_dataset(manifest, "load-dataset", &current_stage);
    manifest.input("dataset", config.dataset_path);
    const SimilarityDataset dataset = load_dataset(config.dataset_path);
    s_dataset.done();

    // ---- knowledge base ----
    std::optional<KnowledgeGraph> graph;
    std::optional<Lexicon> lexicon;
    const bool needs_kb = config.source != SourceKind::txt ||
                          (config.constraints_path.empty() && config.variant != Variant::joint);
    if (needs_kb && !config.graph_path.empty()) {
      Stage s(manifest, "load-kb", &current_stage);
      manifest.input("graph", config.graph_path);
      manifest.input("lexicon", config.lexicon_path);
      graph = load_graph(config.graph_path);
      lexicon = load_lexicon(config.lexicon_path, *graph, config.languages);
      s.done();
    }

    // ---- constraints / dictionary ----
    std::optional<ConstraintSet> cs;
    if (config.variant != Variant::joint) {
      Stage s(manifest, "constraints", &current_stage);
      if (!config.constraints_path.empty()) {
        manifest.input("constraints", config.constraints_path);
        cs = load_constraints(config.constraints_path);
      } else {
        if (!lexicon) throw ConfigError("no constraints file and no lexicon to mine");
        cs = mine_constraints(*lexicon);
        save_constraints(*cs, out_path("constraints.tsv"));
        manifest.output("constraints", out_path("constraints.tsv"));
      }
      s.done();
    }

    const std::string map_src =
        config.map_source_language.empty() ? config.languages[0] : config.map_source_language;
    const std::string map_tgt =
        map_src == config.languages[0] ? config.languages[1] : config.languages[0];

    std::vector<std::pair<std::string, std::string>> dictionary;
    if (config.variant == Variant::map) {
      Stage s(manifest, "dictionary", &current_stage);
      dictionary = translation_dictionary(*cs, map_src, map_tgt);
      if (dictionary.empty()) throw ConfigError("bilingual dictionary is empty");
      std::vector<std::string> lines;
      lines.reserve(dictionary.size());
      for (const auto& [a, b] : dictionary) lines.push_back(a + "\t" + b);
      write_lines(out_path("dictionary.tsv"), lines);
      manifest.output("dictionary", out_path("dictionary.tsv"));
      s.done();
    }

    // ---- corpora ----
    std::array<std::optional<TaggedCorpus>, 2> naturals;
    if (config.source != SourceKind::kb) {
      Stage s(manifest, "load-natural", &current_stage);
      for (std::size_t i = 0; i < 2; ++i) {
        manifest.input("natural_" + config.languages[i], config.natural_paths[i]);
        naturals[i] = load_natural_corpus(config.natural_paths[i], config.languages[i]);
        manifest.metric("natural_" + config.languages[i], naturals[i]->total_tokens());
      }
      s.done();
    }

    // For the joint variants a single training corpus; for map, one corpus
    // per language.
    std::optional<TaggedCorpus> joint_corpus;
    std::array<std::optional<TaggedCorpus>, 2> mono_corpora;

    const bool is_map = config.variant == Variant::map;
    if (config.source == SourceKind::txt) {
      if (is_map) {
        mono_corpora[0] = std::move(naturals[0]);
        mono_corpora[1] = std::move(naturals[1]);
      } else {
        Stage s(manifest, "balance-merge", &current_stage);
        const std::uint64_t budget =
            config.total_tokens
                ? *config.total_tokens
                : 2 * std::min(naturals[0]->total_tokens(), naturals[1]->total_tokens());
        const TaggedCorpus cut_a = truncate_to_budget(
            *naturals[0], budget / 2, splitmix_seed(config.seed, kSeedTruncateA));
        const TaggedCorpus cut_b = truncate_to_budget(
            *naturals[1], budget - budget / 2, splitmix_seed(config.seed, kSeedTruncateB));
        joint_corpus = merge_shuffle({cut_a, cut_b}, splitmix_seed(config.seed, kSeedMerge));
        s.done();
      }
    } else if (config.source == SourceKind::kb) {
      Stage s(manifest, "walk", &current_stage);
      if (is_map) {
        const std::array<std::uint64_t, 2> streams{kSeedWalkMonoA, kSeedWalkMonoB};
        for (std::size_t i = 0; i < 2; ++i) {
          WalkConfig wc = make_walk_config(config, WalkModeKind::monolingual,
                                           config.languages[i], streams[i], std::nullopt);
          mono_corpora[i] = from_synthetic(mono_walks(*graph, *lexicon, wc));
          manifest.metric("walks_" + config.languages[i], mono_corpora[i]->total_tokens());
        }
      } else {
        WalkConfig wc =
            make_walk_config(config, WalkModeKind::bilingual, "", kSeedWalkBi, std::nullopt);
        SyntheticCorpus sc = config.walk_trace_output ? walk_trace(*graph, *lexicon, wc)
                                                      : bi_walks(*graph, *lexicon, wc);
        if (config.walk_trace_output) {
          write_trace(sc, *graph, *lexicon, out_path("corpus.trace.tsv"));
          manifest.output("trace", out_path("corpus.trace.tsv"));
        }
        joint_corpus = from_synthetic(sc);
        manifest.metric("walks_" + config.languages[0], sc.token_counts[0]);
        manifest.metric("walks_" + config.languages[1], sc.token_counts[1]);
      }
      s.done();
    } else {  // hyb
      Stage s(manifest, "walk", &current_stage);
      const std::uint64_t total = *config.total_tokens;
      if (is_map) {
        const std::array<std::uint64_t, 2> walk_streams{kSeedWalkMonoA, kSeedWalkMonoB};
        const std::array<std::uint64_t, 2> hyb_streams{kSeedHybridMonoA, kSeedHybridMonoB};
        for (std::size_t i = 0; i < 2; ++i) {
          const auto lang_total = static_cast<std::uint64_t>(
              std::llround(static_cast<double>(total) * config.language_share[i]));
          const auto syn_budget = static_cast<std::uint64_t>(
              std::llround(static_cast<double>(lang_total) * config.source_share[1]));
          WalkConfig wc = make_walk_config(config, WalkModeKind::monolingual,
                                           config.languages[i], walk_streams[i], syn_budget);
          const TaggedCorpus synthetic = from_synthetic(mono_walks(*graph, *lexicon, wc));
          HybridResult hybrid = build_hybrid_mono(
              *naturals[i], synthetic, lang_total, config.source_share, config.tolerance,
              splitmix_seed(config.seed, hyb_streams[i]));
          write_accounting(hybrid.accounting,
                           out_path("accounting." + config.languages[i] + ".tsv"));
          manifest.output("accounting_" + config.languages[i],
                          out_path("accounting." + config.languages[i] + ".tsv"));
          manifest.metric("hybrid_" + config.languages[i],
                          accounting_json(hybrid.accounting));
          mono_corpora[i] = std::move(hybrid.corpus);
        }
      } else {
        const auto syn_budget = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(total) * config.source_share[1]));
        WalkConfig wc = make_walk_config(config, WalkModeKind::bilingual, "", kSeedWalkBi,
                                         syn_budget);
        SyntheticCorpus sc = config.walk_trace_output ? walk_trace(*graph, *lexicon, wc)
                                                      : bi_walks(*graph, *lexicon, wc);
        if (config.walk_trace_output) {
          write_trace(sc, *graph, *lexicon, out_path("corpus.trace.tsv"));
          manifest.output("trace", out_path("corpus.trace.tsv"));
        }
        BalanceSpec spec;
        spec.total_tokens = total;
        spec.language_share = config.language_share;
        spec.source_share = config.source_share;
        spec.tolerance = config.tolerance;
        HybridResult hybrid =
            build_hybrid(*naturals[0], *naturals[1], from_synthetic(sc), spec,
                         splitmix_seed(config.seed, kSeedHybrid));
        write_accounting(hybrid.accounting, out_path("accounting.tsv"));
        manifest.output("accounting", out_path("accounting.tsv"));
        manifest.metric("hybrid", accounting_json(hybrid.accounting));
        joint_corpus = std::move(hybrid.corpus);
      }
      s.done();
    }

    if (joint_corpus) {
      Stage s(manifest, "write-corpus", &current_stage);
      save_corpus(*joint_corpus, out_path("corpus.txt"));
      manifest.output("corpus", out_path("corpus.txt"));
      manifest.metric("corpus_total", joint_corpus->total_tokens());
      s.done();
    } else {
      Stage s(manifest, "write-corpus", &current_stage);
      for (std::size_t i = 0; i < 2; ++i) {
        const std::string name = "corpus." + config.languages[i] + ".txt";
        save_corpus(*mono_corpora[i], out_path(name));
        manifest.output("corpus_" + config.languages[i], out_path(name));
        manifest.metric("corpus_" + config.languages[i], mono_corpora[i]->total_tokens());
      }
      s.done();
    }

    // ---- training ----
    EvalReport report;
    const OovPolicy policy = config.oov_midpoint ? OovPolicy::midpoint : OovPolicy::exclude;
    if (!is_map) {
      Stage s(manifest, "train", &current_stage);
      const Vocabulary vocab = build_vocab(joint_corpus->contexts, config.min_count);
      const Hyperparams hp = make_train_params(config, kSeedTrainJoint);
      TrainStats stats;
      const ConstraintSet* cs_ptr =
          config.variant == Variant::jointc ? &cs.value() : nullptr;
      const EmbeddingModel model = train(joint_corpus->contexts, vocab, cs_ptr, hp, &stats);
      save_model(model, out_path("model"));
      save_vectors(model.wc_table(), out_path("model.wc.vec"));
      manifest.output("model_w", out_path("model.w.vec"));
      manifest.output("model_c", out_path("model.c.vec"));
      manifest.output("model_wc", out_path("model.wc.vec"));
      manifest.metric("constraint_pairs_used", stats.constraint_pairs_used);
      manifest.metric("constraint_pairs_dropped", stats.constraint_pairs_dropped);
      s.done();

      Stage s_eval(manifest, "eval", &current_stage);
      report = score_pairs(model.wc_table(), dataset, policy);
      write_report_json(report, out_path("eval.json"));
      manifest.output("eval", out_path("eval.json"));
      manifest.eval(report);
      s_eval.done();
    } else {
      Stage s(manifest, "train", &current_stage);
      std::array<std::optional<VectorTable>, 2> tables;
      const std::array<std::uint64_t, 2> streams{kSeedTrainA, kSeedTrainB};
      for (std::size_t i = 0; i < 2; ++i) {
        const Vocabulary vocab = build_vocab(mono_corpora[i]->contexts, config.min_count);
        const Hyperparams hp = make_train_params(config, streams[i]);
        const EmbeddingModel model = train(mono_corpora[i]->contexts, vocab, nullptr, hp);
        const std::string base = out_path("model." + config.languages[i]);
        save_model(model, base);
        save_vectors(model.wc_table(), base + ".wc.vec");
        manifest.output("model_" + config.languages[i], base + ".wc.vec");
        tables[i] = model.wc_table();
      }
      s.done();

      Stage s_map(manifest, "map", &current_stage);
      const std::size_t src_slot = map_src == config.languages[0] ? 0 : 1;
      const std::size_t tgt_slot = 1 - src_slot;
      const PreprocessedTable pre_src = preprocess(*tables[src_slot]);
      const PreprocessedTable pre_tgt = preprocess(*tables[tgt_slot]);
      MappingProblem problem{pre_src, pre_tgt, dictionary};
      FitInfo info;
      const LinearMap map = fit_orthogonal(problem, &info);
      save_map(map, out_path("map.txt"));
      manifest.output("map", out_path("map.txt"));
      manifest.metric("dictionary_pairs_used", info.used_pairs);
      manifest.metric("dictionary_pairs_dropped", info.dropped_pairs);
      s_map.done();

      Stage s_eval(manifest, "eval", &current_stage);
      report = score_pairs_mapped(map, pre_src, pre_tgt, map_src, map_tgt, dataset, policy);
      write_report_json(report, out_path("eval.json"));
      manifest.output("eval", out_path("eval.json"));
      manifest.eval(report);
      s_eval.done();
    }

    manifest.write_ok(manifest_path);
    return PipelineResult{manifest_path, std::move(report)};
  } catch (const NumericError& e) {
    manifest.write_failed(manifest_path, current_stage, e.what());
    throw NumericError("pipeline stage '" + current_stage + "' failed: " + e.what());
  } catch (const std::exception& e) {
    manifest.write_failed(manifest_path, current_stage, e.what());
    throw Error("pipeline stage '" + current_stage + "' failed: " + e.what());
  }
}

}  // namespace biwalk
