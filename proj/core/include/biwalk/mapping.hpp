#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "biwalk/vectors.hpp"

namespace biwalk {

// Embedding table after the mapping preprocessing chain: length
// normalization, dimension-wise mean centering, re-normalization. Rows that
// cannot be normalized stay zero and are counted in `zero_rows`.
struct PreprocessedTable {
  int dim = 0;
  std::vector<std::string> words;
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<double> data;
  std::size_t zero_rows = 0;

  std::span<const double> row(std::uint32_t i) const {
    return {data.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
  }
  std::optional<std::uint32_t> find(const std::string& word) const {
    auto it = index.find(word);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

PreprocessedTable preprocess(const VectorTable& table);

// Orthogonal linear map source -> target, row-major D x D.
struct LinearMap {
  int dim = 0;
  std::vector<double> m;

  std::vector<double> apply(std::span<const double> x) const;
};

struct MappingProblem {
  const PreprocessedTable& source;
  const PreprocessedTable& target;
  std::vector<std::pair<std::string, std::string>> dictionary;  // (source, target)
};

struct FitInfo {
  std::size_t used_pairs = 0;
  std::size_t dropped_pairs = 0;  // either side out of vocabulary
  bool underdetermined = false;   // fewer usable pairs than dimensions
};

// Least-squares rotation via the singular-value solution of the
// cross-covariance matrix (orthogonal Procrustes). Throws NumericError when
// the cross-covariance is degenerate.
LinearMap fit_orthogonal(const MappingProblem& problem, FitInfo* info = nullptr);

// cosine(M x_source, y_target); throws LookupError for OOV words.
double cross_similarity(const LinearMap& map, const PreprocessedTable& source,
                        const PreprocessedTable& target, const std::string& source_word,
                        const std::string& target_word);

// ||M^T M - I||_F, the orthogonality residual.
double orthogonality_error(const LinearMap& map);

// Plain text D x D matrix, one row per line.
void save_map(const LinearMap& map, const std::string& path);
LinearMap load_map(const std::string& path);

}  // namespace biwalk
