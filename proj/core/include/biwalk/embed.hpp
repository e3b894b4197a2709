#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "biwalk/vectors.hpp"

namespace biwalk {

class ConstraintSet;

// Corpus vocabulary: indices dense, sorted by descending frequency with ties
// broken lexicographically.
struct Vocabulary {
  std::vector<std::string> words;
  std::vector<std::uint64_t> freqs;
  std::unordered_map<std::string, std::uint32_t> index;
  std::uint64_t total_tokens = 0;  // sum of kept frequencies
  std::uint32_t min_count = 1;

  std::size_t size() const { return words.size(); }
  std::optional<std::uint32_t> find(const std::string& word) const {
    auto it = index.find(word);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

Vocabulary build_vocab(const std::vector<std::string>& contexts, std::uint32_t min_count);

struct Hyperparams {
  int dim = 300;
  int window = 5;
  int negatives = 5;
  double subsample = 0.0;  // t = 0 disables subsampling
  double lambda = 0.01;
  double learning_rate = 0.025;
  int epochs = 5;
  double noise_power = 0.75;  // negatives drawn from freq^noise_power
  bool fixed_window = false;  // default: effective window uniform in [1, window]
  int constraint_neighbor_cap = 16;
  bool symmetric_constraints = false;  // also move neighbors toward the word
  int workers = 1;
  std::uint64_t seed = 1;
};

// Skipgram parameters: target matrix W and context matrix C over a shared
// vocabulary. A word's representation is W[w] + C[w].
class EmbeddingModel {
 public:
  EmbeddingModel(Vocabulary vocab, int dim);

  const Vocabulary& vocab() const { return vocab_; }
  int dim() const { return dim_; }

  std::span<float> w_row(std::uint32_t i) { return row(w_, i); }
  std::span<float> c_row(std::uint32_t i) { return row(c_, i); }
  std::span<const float> w_row(std::uint32_t i) const { return row(w_, i); }
  std::span<const float> c_row(std::uint32_t i) const { return row(c_, i); }

  // W[w] + C[w]; throws LookupError for OOV words.
  std::vector<float> word_vector(const std::string& word) const;

  // Throws NumericError if any entry is NaN or infinite.
  void check_finite() const;

  VectorTable w_table() const;
  VectorTable c_table() const;
  VectorTable wc_table() const;

 private:
  std::span<float> row(std::vector<float>& m, std::uint32_t i) {
    return {m.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const float> row(const std::vector<float>& m, std::uint32_t i) const {
    return {m.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
  }

  Vocabulary vocab_;
  int dim_;
  std::vector<float> w_;
  std::vector<float> c_;

  friend void init_model(EmbeddingModel& model, std::uint64_t seed);
};

namespace detail {

// Loss/gradient math shared by float training and double-precision gradient
// checks; one code path for both.

template <typename T>
double dot(std::span<const T> a, std::span<const T> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

inline double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log s(c.w) + sum_n log s(-c_n.w)
template <typename T>
double pair_loss(std::span<const T> w, std::span<const T> c,
                 const std::vector<std::span<const T>>& negatives) {
  double loss = log_sigmoid(dot(c, w));
  for (const auto& n : negatives) loss += log_sigmoid(-dot(n, w));
  return loss;
}

// One ascent step on pair_loss with rate lr. Context and negative rows are
// updated against the pre-step w; w receives its accumulated gradient last.
template <typename T>
void apply_pair_step(std::span<T> w, std::span<T> c, const std::vector<std::span<T>>& negatives,
                     double lr, std::vector<T>& scratch) {
  const std::size_t d = w.size();
  scratch.assign(d, T{0});
  {
    const double g = (1.0 - sigmoid(dot<T>(c, w))) * lr;
    for (std::size_t i = 0; i < d; ++i) scratch[i] += static_cast<T>(g * c[i]);
    for (std::size_t i = 0; i < d; ++i) c[i] += static_cast<T>(g * w[i]);
  }
  for (const auto& n : negatives) {
    const double g = -sigmoid(dot<T>(n, w)) * lr;
    for (std::size_t i = 0; i < d; ++i) scratch[i] += static_cast<T>(g * n[i]);
    for (std::size_t i = 0; i < d; ++i) n[i] += static_cast<T>(g * w[i]);
  }
  for (std::size_t i = 0; i < d; ++i) w[i] += scratch[i];
}

// -lambda * sum_m ||w - n_m||^2
template <typename T>
double constraint_penalty(std::span<const T> w, const std::vector<std::span<const T>>& neighbors,
                          double lambda) {
  double sum = 0.0;
  for (const auto& n : neighbors) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double d = static_cast<double>(w[i]) - n[i];
      sum += d * d;
    }
  }
  return -lambda * sum;
}

// Ascent step on the penalty: w += lr * 2*lambda * sum_m (n_m - w). With
// `symmetric`, each neighbor is also pulled toward the pre-step w.
template <typename T>
void apply_constraint_step(std::span<T> w, const std::vector<std::span<T>>& neighbors,
                           double lambda, double lr, bool symmetric, std::vector<T>& scratch) {
  const std::size_t d = w.size();
  const double g = 2.0 * lambda * lr;
  scratch.assign(d, T{0});
  for (const auto& n : neighbors) {
    for (std::size_t i = 0; i < d; ++i) scratch[i] += static_cast<T>(g * (n[i] - w[i]));
  }
  if (symmetric) {
    for (const auto& n : neighbors) {
      for (std::size_t i = 0; i < d; ++i) n[i] += static_cast<T>(g * (w[i] - n[i]));
    }
  }
  for (std::size_t i = 0; i < d; ++i) w[i] += scratch[i];
}

}  // namespace detail

double pair_loss(std::span<const float> w, std::span<const float> c,
                 const std::vector<std::span<const float>>& negatives);
double constraint_penalty(std::span<const float> w,
                          const std::vector<std::span<const float>>& neighbors, double lambda);

// One gradient-ascent step on pair_loss for (center, context, negatives),
// touching W[center], C[context] and C[neg].
void sgd_step(EmbeddingModel& model, std::uint32_t center, std::uint32_t context,
              std::span<const std::uint32_t> negatives, double lr);

// One gradient-ascent step on the constraint penalty for W[center] against
// W[neighbor] rows.
void constraint_step(EmbeddingModel& model, std::uint32_t center,
                     std::span<const std::uint32_t> neighbors, double lambda, double lr);

// Constraint pairs resolved to vocabulary indices; pairs with an
// out-of-vocabulary side are dropped and counted.
struct ResolvedConstraints {
  std::vector<std::vector<std::uint32_t>> neighbors;  // per vocab index, sorted
  std::size_t matched_pairs = 0;
  std::size_t dropped_pairs = 0;
};

ResolvedConstraints resolve_constraints(const ConstraintSet& constraints,
                                        const Vocabulary& vocab);

struct TrainStats {
  std::uint64_t pair_updates = 0;
  std::uint64_t constraint_updates = 0;
  std::size_t constraint_pairs_used = 0;
  std::size_t constraint_pairs_dropped = 0;
};

// Full skipgram-with-negative-sampling training loop over a line-delimited
// corpus, optionally with the constraint regularizer. Deterministic for a
// fixed seed and workers == 1.
EmbeddingModel train(const std::vector<std::string>& contexts, const Vocabulary& vocab,
                     const ConstraintSet* constraints, const Hyperparams& hp,
                     TrainStats* stats = nullptr);

// Writes `<base>.w.vec` and `<base>.c.vec` (word2vec text layout each).
void save_model(const EmbeddingModel& model, const std::string& base);

// Reads the pair written by save_model. Loaded models carry zero
// frequencies; they serve lookup, not further training.
EmbeddingModel load_model(const std::string& base);

}  // namespace biwalk
