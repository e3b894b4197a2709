#include "biwalk/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include <json.hpp>

#include "biwalk/errors.hpp"
#include "biwalk/mapping.hpp"
#include "biwalk/text.hpp"

namespace biwalk {

namespace {

double parse_score(std::string_view field, const std::string& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(field), &used);
    if (used != field.size() || !std::isfinite(v)) throw std::invalid_argument("score");
    return v;
  } catch (const std::exception&) {
    throw ParseError(path, line, "unparsable score: " + std::string(field));
  }
}

template <typename T>
double cosine_impl(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) throw ValidationError("cosine of vectors with different sizes");
  double uv = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += static_cast<double>(u[i]) * v[i];
    uu += static_cast<double>(u[i]) * u[i];
    vv += static_cast<double>(v[i]) * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw NumericError("cosine undefined for a zero vector");
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

// Average ranks (1-based), ties share the mean of their rank range.
std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw NumericError("correlation undefined: constant rank vector");
  }
  return sxy / std::sqrt(sxx * syy);
}

// Tries the word as-is, then with spaces joined by underscores.
std::optional<std::uint32_t> lookup(const VectorTable& table, const std::string& word) {
  if (auto id = table.find(word)) return id;
  if (word.find(' ') != std::string::npos) {
    std::string joined = word;
    std::replace(joined.begin(), joined.end(), ' ', '_');
    return table.find(joined);
  }
  return std::nullopt;
}

std::optional<std::uint32_t> lookup(const PreprocessedTable& table, const std::string& word) {
  if (auto id = table.find(word)) return id;
  if (word.find(' ') != std::string::npos) {
    std::string joined = word;
    std::replace(joined.begin(), joined.end(), ' ', '_');
    return table.find(joined);
  }
  return std::nullopt;
}

EvalReport finish_report(std::vector<PairScore> rows, OovPolicy policy) {
  EvalReport report;
  report.rows = std::move(rows);
  std::vector<double> predicted;
  std::vector<double> gold;
  for (auto& row : report.rows) {
    if (row.predicted) {
      ++report.covered_pairs;
    } else {
      ++report.oov_pairs;
      if (policy == OovPolicy::midpoint) row.predicted = 0.0;
    }
    if (row.predicted) {
      predicted.push_back(*row.predicted);
      gold.push_back(row.pair.gold);
    }
  }
  if (report.covered_pairs == 0) {
    throw NumericError("evaluation impossible: every pair is out of vocabulary");
  }
  report.rho = spearman(predicted, gold);
  return report;
}

}  // namespace

SimilarityDataset load_dataset(const std::string& path) {
  const auto lines = read_lines(path);
  SimilarityDataset ds;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_tab(line);
    if (fields.size() != 5) {
      throw ParseError(path, i + 1, "expected `word1 lang1 word2 lang2 score`");
    }
    ds.pairs.push_back({fold_case(fields[0]), std::string(fields[1]), fold_case(fields[2]),
                        std::string(fields[3]), parse_score(fields[4], path, i + 1)});
  }
  return ds;
}

void save_dataset(const SimilarityDataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  for (const auto& p : dataset.pairs) {
    out << p.word1 << '\t' << p.lang1 << '\t' << p.word2 << '\t' << p.lang2 << '\t' << p.gold
        << '\n';
  }
  if (!out) throw ParseError("write failed: " + path);
}

MonolingualDataset load_monolingual_dataset(const std::string& path, const std::string& lang) {
  const auto lines = read_lines(path);
  MonolingualDataset ds;
  ds.lang = lang;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_tab(line);
    if (fields.size() != 4) {
      throw ParseError(path, i + 1, "expected `id word1 word2 score`");
    }
    ds.rows.push_back({std::string(fields[0]), fold_case(fields[1]), fold_case(fields[2]),
                       parse_score(fields[3], path, i + 1)});
  }
  return ds;
}

CrossLingualBuild build_crosslingual(const MonolingualDataset& a, const MonolingualDataset& b) {
  if (a.lang == b.lang) {
    throw ValidationError("cross-lingual build needs two different languages");
  }
  std::map<std::string, const MonolingualDataset::Row*> b_by_id;
  for (const auto& row : b.rows) {
    if (!b_by_id.emplace(row.id, &row).second) {
      throw ValidationError("duplicate pair id in dataset: " + row.id);
    }
  }

  // De-dup on the canonical surface pair, keeping the mean of all golds.
  std::map<std::tuple<std::string, std::string, std::string, std::string>,
           std::pair<double, std::size_t>>
      merged;
  CrossLingualBuild out;
  std::size_t matched = 0;
  auto add = [&](const std::string& w1, const std::string& l1, const std::string& w2,
                 const std::string& l2, double gold) {
    auto key = std::make_tuple(w1, l1, w2, l2);
    auto flipped = std::make_tuple(w2, l2, w1, l1);
    if (flipped < key) key = flipped;
    auto& slot = merged[key];
    slot.first += gold;
    slot.second += 1;
  };
  for (const auto& row : a.rows) {
    auto it = b_by_id.find(row.id);
    if (it == b_by_id.end()) {
      ++out.skipped_ids;
      continue;
    }
    ++matched;
    const auto& other = *it->second;
    const double gold = (row.score + other.score) / 2.0;
    add(row.word1, a.lang, other.word2, b.lang, gold);
    add(other.word1, b.lang, row.word2, a.lang, gold);
  }
  out.skipped_ids += b.rows.size() - matched;
  for (const auto& [key, acc] : merged) {
    out.dataset.pairs.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                                 std::get<3>(key), acc.first / static_cast<double>(acc.second)});
  }
  return out;
}

double cosine(std::span<const float> u, std::span<const float> v) { return cosine_impl(u, v); }
double cosine(std::span<const double> u, std::span<const double> v) { return cosine_impl(u, v); }

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("spearman: length mismatch");
  if (x.size() < 2) throw ValidationError("spearman needs at least two pairs");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ValidationError("spearman: non-finite input");
    }
  }
  return pearson(average_ranks(x), average_ranks(y));
}

EvalReport score_pairs(const VectorTable& table, const SimilarityDataset& dataset,
                       OovPolicy policy) {
  if (dataset.pairs.empty()) throw ValidationError("empty similarity dataset");
  std::vector<PairScore> rows;
  rows.reserve(dataset.pairs.size());
  for (const auto& pair : dataset.pairs) {
    PairScore score{pair, std::nullopt};
    const auto i1 = lookup(table, pair.word1);
    const auto i2 = lookup(table, pair.word2);
    if (i1 && i2) {
      try {
        score.predicted = cosine(table.row(*i1), table.row(*i2));
      } catch (const NumericError&) {
        // zero vector: treat as uncovered
      }
    }
    rows.push_back(std::move(score));
  }
  return finish_report(std::move(rows), policy);
}

EvalReport score_pairs_mapped(const LinearMap& map, const PreprocessedTable& source,
                              const PreprocessedTable& target, const std::string& source_lang,
                              const std::string& target_lang, const SimilarityDataset& dataset,
                              OovPolicy policy) {
  if (dataset.pairs.empty()) throw ValidationError("empty similarity dataset");

  auto vector_for = [&](const std::string& word,
                        const std::string& lang) -> std::optional<std::vector<double>> {
    if (lang == source_lang) {
      if (auto id = lookup(source, word)) {
        const auto row = source.row(*id);
        return map.apply(row);
      }
      return std::nullopt;
    }
    if (lang == target_lang) {
      if (auto id = lookup(target, word)) {
        const auto row = target.row(*id);
        return std::vector<double>(row.begin(), row.end());
      }
      return std::nullopt;
    }
    throw ValidationError("dataset language " + lang + " is neither mapping side (" +
                          source_lang + "/" + target_lang + ")");
  };

  std::vector<PairScore> rows;
  rows.reserve(dataset.pairs.size());
  for (const auto& pair : dataset.pairs) {
    PairScore score{pair, std::nullopt};
    const auto v1 = vector_for(pair.word1, pair.lang1);
    const auto v2 = vector_for(pair.word2, pair.lang2);
    if (v1 && v2) {
      try {
        score.predicted = cosine(std::span<const double>(*v1), std::span<const double>(*v2));
      } catch (const NumericError&) {
      }
    }
    rows.push_back(std::move(score));
  }
  return finish_report(std::move(rows), policy);
}

void write_report_json(const EvalReport& report, const std::string& path) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r{{"word1", row.pair.word1}, {"lang1", row.pair.lang1},
                     {"word2", row.pair.word2}, {"lang2", row.pair.lang2},
                     {"gold", row.pair.gold}};
    if (row.predicted) {
      r["predicted"] = *row.predicted;
    } else {
      r["predicted"] = nullptr;
    }
    rows.push_back(std::move(r));
  }
  const nlohmann::json doc{{"spearman", report.rho},
                           {"covered_pairs", report.covered_pairs},
                           {"oov_pairs", report.oov_pairs},
                           {"pairs", rows}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace biwalk
