#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biwalk/vectors.hpp"

namespace biwalk {

struct LinearMap;
struct PreprocessedTable;

// Cross-lingual word similarity pair with a human gold score.
struct SimilarityPair {
  std::string word1;
  std::string lang1;
  std::string word2;
  std::string lang2;
  double gold = 0.0;
};

struct SimilarityDataset {
  std::vector<SimilarityPair> pairs;
};

// Monolingual source dataset; rows aligned across languages by pair id.
struct MonolingualDataset {
  struct Row {
    std::string id;
    std::string word1;
    std::string word2;
    double score = 0.0;
  };
  std::string lang;
  std::vector<Row> rows;
};

// TSV `word1 lang1 word2 lang2 score`; words are case-folded on load.
SimilarityDataset load_dataset(const std::string& path);
void save_dataset(const SimilarityDataset& dataset, const std::string& path);

// TSV `id word1 word2 score`.
MonolingualDataset load_monolingual_dataset(const std::string& path, const std::string& lang);

struct CrossLingualBuild {
  SimilarityDataset dataset;
  std::size_t skipped_ids = 0;  // rows without a counterpart in the other dataset
};

// For each id-aligned source pair, emits both mixed-language combinations
// with the mean of the two monolingual golds; duplicate surface pairs are
// merged keeping the mean.
CrossLingualBuild build_crosslingual(const MonolingualDataset& a, const MonolingualDataset& b);

// u.v / (|u||v|); throws NumericError when either vector is zero.
double cosine(std::span<const float> u, std::span<const float> v);
double cosine(std::span<const double> u, std::span<const double> v);

// Spearman's rank correlation with average ranks on ties. Throws
// ValidationError for bad shapes and NumericError when a rank vector is
// constant.
double spearman(std::span<const double> x, std::span<const double> y);

enum class OovPolicy {
  exclude,   // drop OOV pairs from the correlation, report them
  midpoint,  // score OOV pairs 0 (the midpoint of the cosine range)
};

struct PairScore {
  SimilarityPair pair;
  std::optional<double> predicted;  // empty for excluded OOV pairs
};

struct EvalReport {
  double rho = 0.0;
  std::size_t covered_pairs = 0;
  std::size_t oov_pairs = 0;
  std::vector<PairScore> rows;
};

// Joint-space evaluation: predicted score is the cosine of the two table
// vectors (W+C for trained models). Words with embedded spaces fall back to
// an underscore-joined lookup.
EvalReport score_pairs(const VectorTable& table, const SimilarityDataset& dataset,
                       OovPolicy policy = OovPolicy::exclude);

// Mapping-baseline evaluation: source-language vectors are mapped before the
// cosine. Pairs are oriented by their language tags.
EvalReport score_pairs_mapped(const LinearMap& map, const PreprocessedTable& source,
                              const PreprocessedTable& target, const std::string& source_lang,
                              const std::string& target_lang, const SimilarityDataset& dataset,
                              OovPolicy policy = OovPolicy::exclude);

// JSON report: rho, coverage, per-pair rows.
void write_report_json(const EvalReport& report, const std::string& path);

}  // namespace biwalk
