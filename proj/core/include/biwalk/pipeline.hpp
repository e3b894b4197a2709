#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biwalk/embed.hpp"
#include "biwalk/eval.hpp"

namespace biwalk {

enum class Variant { map, joint, jointc };
enum class SourceKind { txt, kb, hyb };

// Declarative pipeline description; normally loaded from a JSON file with
// optional KEY=VALUE overrides (see load_pipeline_config).
struct PipelineConfig {
  Variant variant = Variant::joint;
  SourceKind source = SourceKind::kb;
  std::array<std::string, 2> languages;

  std::string graph_path;
  std::string lexicon_path;
  std::array<std::string, 2> natural_paths;  // aligned with languages
  std::string constraints_path;              // optional; mined from the lexicon otherwise
  std::string dataset_path;
  std::string out_dir;

  std::uint64_t seed = 1;
  int threads = 1;

  // walk stage
  double alpha = 0.85;
  std::uint64_t walk_contexts = 0;
  std::optional<std::uint64_t> walk_target_tokens;
  bool walk_trace_output = false;

  // corpus stage
  std::optional<std::uint64_t> total_tokens;
  std::array<double, 2> language_share{0.5, 0.5};
  std::array<double, 2> source_share{0.5, 0.5};
  double tolerance = 0.01;

  // train stage (seed/workers come from the pipeline fields above)
  Hyperparams train;
  std::uint32_t min_count = 1;

  // eval stage
  bool oov_midpoint = false;

  // mapping direction; defaults to languages[0] -> languages[1]
  std::string map_source_language;
};

PipelineConfig load_pipeline_config(const std::string& json_path,
                                    const std::vector<std::string>& overrides = {});

// Checks that every input the chosen variant needs is configured; throws
// ConfigError before any work happens.
void validate_pipeline_config(const PipelineConfig& config);

struct PipelineResult {
  std::string manifest_path;
  EvalReport report;
};

// Executes the stage graph for the configured variant, writing corpora,
// models, mapping, evaluation report and a manifest (inputs, seeds, token
// accounting, output hashes) under out_dir. On stage failure the manifest
// is written with status "failed" and partial outputs flagged, then an
// Error naming the stage is thrown.
PipelineResult run_pipeline(const PipelineConfig& config);

std::string to_string(Variant v);
std::string to_string(SourceKind s);
Variant variant_from_string(const std::string& s);
SourceKind source_from_string(const std::string& s);

}  // namespace biwalk
