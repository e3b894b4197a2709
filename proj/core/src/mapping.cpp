#include "biwalk/mapping.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "biwalk/errors.hpp"
#include "biwalk/eval.hpp"
#include "biwalk/text.hpp"

namespace biwalk {

namespace {

// Normalizes every row to unit length; rows with zero norm stay zero.
std::size_t normalize_rows(std::vector<double>& data, std::size_t rows, int dim) {
  std::size_t zeros = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = data.data() + r * dim;
    double norm = 0.0;
    for (int d = 0; d < dim; ++d) norm += row[d] * row[d];
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      ++zeros;
      continue;
    }
    for (int d = 0; d < dim; ++d) row[d] /= norm;
  }
  return zeros;
}

}  // namespace

PreprocessedTable preprocess(const VectorTable& table) {
  PreprocessedTable out;
  out.dim = table.dim;
  out.words = table.words;
  out.index = table.index;
  out.data.assign(table.data.begin(), table.data.end());
  const std::size_t rows = out.words.size();

  normalize_rows(out.data, rows, out.dim);
  if (rows > 0) {
    std::vector<double> mean(out.dim, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* row = out.data.data() + r * out.dim;
      for (int d = 0; d < out.dim; ++d) mean[d] += row[d];
    }
    for (double& m : mean) m /= static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      double* row = out.data.data() + r * out.dim;
      for (int d = 0; d < out.dim; ++d) row[d] -= mean[d];
    }
  }
  out.zero_rows = normalize_rows(out.data, rows, out.dim);
  return out;
}

std::vector<double> LinearMap::apply(std::span<const double> x) const {
  std::vector<double> y(dim, 0.0);
  for (int r = 0; r < dim; ++r) {
    const double* row = m.data() + static_cast<std::size_t>(r) * dim;
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

LinearMap fit_orthogonal(const MappingProblem& problem, FitInfo* info) {
  const int dim = problem.source.dim;
  if (dim != problem.target.dim) {
    throw ConfigError("source and target spaces have different dimensionality");
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> usable;
  std::size_t dropped = 0;
  for (const auto& [sw, tw] : problem.dictionary) {
    const auto si = problem.source.find(sw);
    const auto ti = problem.target.find(tw);
    if (si && ti) {
      usable.emplace_back(*si, *ti);
    } else {
      ++dropped;
    }
  }
  if (usable.empty()) {
    throw ConfigError("no dictionary pair is covered by both vocabularies");
  }
  if (info != nullptr) {
    info->used_pairs = usable.size();
    info->dropped_pairs = dropped;
    info->underdetermined = usable.size() < static_cast<std::size_t>(dim);
  }

  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [si, ti] : usable) {
    Eigen::Map<const Eigen::VectorXd> x(problem.source.row(si).data(), dim);
    Eigen::Map<const Eigen::VectorXd> y(problem.target.row(ti).data(), dim);
    cross.noalias() += y * x.transpose();
  }
  if (cross.norm() < 1e-12) {
    throw NumericError("degenerate cross-covariance (all-zero); cannot fit a mapping");
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd rotation = svd.matrixU() * svd.matrixV().transpose();

  LinearMap map;
  map.dim = dim;
  map.m.resize(static_cast<std::size_t>(dim) * dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) map.m[static_cast<std::size_t>(r) * dim + c] = rotation(r, c);
  }
  if (orthogonality_error(map) > 1e-6) {
    throw NumericError("fitted map failed the orthogonality check");
  }
  return map;
}

double cross_similarity(const LinearMap& map, const PreprocessedTable& source,
                        const PreprocessedTable& target, const std::string& source_word,
                        const std::string& target_word) {
  const auto si = source.find(source_word);
  if (!si) throw LookupError("out-of-vocabulary source word: " + source_word);
  const auto ti = target.find(target_word);
  if (!ti) throw LookupError("out-of-vocabulary target word: " + target_word);
  const std::vector<double> mapped = map.apply(source.row(*si));
  return cosine(std::span<const double>(mapped), target.row(*ti));
}

double orthogonality_error(const LinearMap& map) {
  const int dim = map.dim;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      map.m.data(), dim, dim);
  return (m.transpose() * m - Eigen::MatrixXd::Identity(dim, dim)).norm();
}

void save_map(const LinearMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  char buf[64];
  for (int r = 0; r < map.dim; ++r) {
    for (int c = 0; c < map.dim; ++c) {
      std::snprintf(buf, sizeof(buf), c == 0 ? "%.17g" : " %.17g",
                    map.m[static_cast<std::size_t>(r) * map.dim + c]);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw ParseError("write failed: " + path);
}

LinearMap load_map(const std::string& path) {
  const auto lines = read_lines(path);
  LinearMap map;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_ws(lines[i]);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      try {
        row.push_back(std::stod(std::string(f)));
      } catch (const std::exception&) {
        throw ParseError(path, i + 1, "unparsable matrix entry");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path, 1, "empty map file");
  map.dim = static_cast<int>(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.size()) {
      throw ParseError(path, r + 1, "map matrix is not square");
    }
    map.m.insert(map.m.end(), rows[r].begin(), rows[r].end());
  }
  return map;
}

}  // namespace biwalk
