#include "biwalk/embed.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "biwalk/constraints.hpp"
#include "biwalk/errors.hpp"
#include "biwalk/rng.hpp"
#include "biwalk/sampling.hpp"
#include "biwalk/text.hpp"

namespace biwalk {

namespace {

constexpr std::uint64_t kInitStream = 0x494e4954;       // model init
constexpr std::uint64_t kTrainStreamBase = 0x545247 << 8;  // per (epoch, worker)
constexpr double kLrFloorRatio = 1e-4;

std::vector<std::span<float>> gather_rows(EmbeddingModel& m, bool context_side,
                                          std::span<const std::uint32_t> ids) {
  std::vector<std::span<float>> rows;
  rows.reserve(ids.size());
  for (auto id : ids) rows.push_back(context_side ? m.c_row(id) : m.w_row(id));
  return rows;
}

}  // namespace

Vocabulary build_vocab(const std::vector<std::string>& contexts, std::uint32_t min_count) {
  std::unordered_map<std::string, std::uint64_t> tally;
  for (const auto& line : contexts) {
    for (const auto& tok : split_ws(line)) {
      ++tally[std::string(tok)];
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  kept.reserve(tally.size());
  for (auto& [word, freq] : tally) {
    if (freq >= min_count) kept.emplace_back(word, freq);
  }
  if (kept.empty()) {
    throw ConfigError("vocabulary is empty (min_count " + std::to_string(min_count) + ")");
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab;
  vocab.min_count = min_count;
  vocab.words.reserve(kept.size());
  vocab.freqs.reserve(kept.size());
  for (std::uint32_t i = 0; i < kept.size(); ++i) {
    vocab.words.push_back(std::move(kept[i].first));
    vocab.freqs.push_back(kept[i].second);
    vocab.index.emplace(vocab.words.back(), i);
    vocab.total_tokens += kept[i].second;
  }
  return vocab;
}

EmbeddingModel::EmbeddingModel(Vocabulary vocab, int dim)
    : vocab_(std::move(vocab)), dim_(dim) {
  if (dim_ <= 0) throw ConfigError("dimensionality must be positive");
  const std::size_t n = vocab_.size() * static_cast<std::size_t>(dim_);
  w_.assign(n, 0.0f);
  c_.assign(n, 0.0f);
}

std::vector<float> EmbeddingModel::word_vector(const std::string& word) const {
  const auto id = vocab_.find(word);
  if (!id) throw LookupError("out-of-vocabulary word: " + word);
  const auto w = w_row(*id);
  const auto c = c_row(*id);
  std::vector<float> out(dim_);
  for (int i = 0; i < dim_; ++i) out[i] = w[i] + c[i];
  return out;
}

void EmbeddingModel::check_finite() const {
  for (const auto* m : {&w_, &c_}) {
    for (float v : *m) {
      if (!std::isfinite(v)) {
        throw NumericError("non-finite value in embedding matrices");
      }
    }
  }
}

VectorTable EmbeddingModel::w_table() const {
  VectorTable t;
  t.dim = dim_;
  t.words = vocab_.words;
  t.data = w_;
  t.rebuild_index();
  return t;
}

VectorTable EmbeddingModel::c_table() const {
  VectorTable t;
  t.dim = dim_;
  t.words = vocab_.words;
  t.data = c_;
  t.rebuild_index();
  return t;
}

VectorTable EmbeddingModel::wc_table() const {
  VectorTable t = w_table();
  for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] += c_[i];
  return t;
}

void init_model(EmbeddingModel& model, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, kInitStream);
  const double inv_dim = 1.0 / model.dim_;
  for (auto& v : model.w_) v = static_cast<float>((rng.real() - 0.5) * inv_dim);
  std::fill(model.c_.begin(), model.c_.end(), 0.0f);
}

double pair_loss(std::span<const float> w, std::span<const float> c,
                 const std::vector<std::span<const float>>& negatives) {
  return detail::pair_loss(w, c, negatives);
}

double constraint_penalty(std::span<const float> w,
                          const std::vector<std::span<const float>>& neighbors,
                          double lambda) {
  return detail::constraint_penalty(w, neighbors, lambda);
}

void sgd_step(EmbeddingModel& model, std::uint32_t center, std::uint32_t context,
              std::span<const std::uint32_t> negatives, double lr) {
  thread_local std::vector<float> scratch;
  auto rows = gather_rows(model, true, negatives);
  detail::apply_pair_step(model.w_row(center), model.c_row(context), rows, lr, scratch);
}

void constraint_step(EmbeddingModel& model, std::uint32_t center,
                     std::span<const std::uint32_t> neighbors, double lambda, double lr) {
  thread_local std::vector<float> scratch;
  auto rows = gather_rows(model, false, neighbors);
  detail::apply_constraint_step(model.w_row(center), rows, lambda, lr, false, scratch);
}

ResolvedConstraints resolve_constraints(const ConstraintSet& constraints,
                                        const Vocabulary& vocab) {
  ResolvedConstraints out;
  out.neighbors.resize(vocab.size());
  for (const auto& p : constraints.pairs()) {
    const auto a = vocab.find(p.a.word);
    const auto b = vocab.find(p.b.word);
    if (!a || !b || *a == *b) {
      ++out.dropped_pairs;
      continue;
    }
    out.neighbors[*a].push_back(*b);
    out.neighbors[*b].push_back(*a);
    ++out.matched_pairs;
  }
  for (auto& nbrs : out.neighbors) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return out;
}

namespace {

struct TrainShared {
  const std::vector<std::vector<std::uint32_t>>& encoded;
  EmbeddingModel& model;
  const Hyperparams& hp;
  const AliasSampler& noise;
  const ResolvedConstraints* constraints;
  std::uint64_t planned_updates;
  std::atomic<std::uint64_t> processed{0};
  std::atomic<std::uint64_t> pair_updates{0};
  std::atomic<std::uint64_t> constraint_updates{0};
};

// Processes contexts [begin, end) for one epoch. Hogwild: W/C rows are
// updated without locks; single-worker runs are exactly deterministic.
void train_span(TrainShared& sh, Rng rng, std::size_t begin, std::size_t end) {
  const Hyperparams& hp = sh.hp;
  const double lr0 = hp.learning_rate;
  const double lr_floor = lr0 * kLrFloorRatio;
  const bool subsampling = hp.subsample > 0.0;
  const double sample_threshold =
      subsampling ? hp.subsample * static_cast<double>(sh.model.vocab().total_tokens) : 0.0;
  const bool constrained = sh.constraints != nullptr && hp.lambda > 0.0;

  std::vector<std::uint32_t> sentence;
  std::vector<std::uint32_t> negatives;
  std::vector<std::uint32_t> picked;
  std::uint64_t pair_updates = 0;
  std::uint64_t constraint_updates = 0;

  for (std::size_t ctx = begin; ctx < end; ++ctx) {
    const auto& ids = sh.encoded[ctx];
    sentence.clear();
    if (subsampling) {
      for (auto id : ids) {
        const auto freq = static_cast<double>(sh.model.vocab().freqs[id]);
        const double keep =
            (std::sqrt(freq / sample_threshold) + 1.0) * sample_threshold / freq;
        if (keep >= 1.0 || rng.real() < keep) sentence.push_back(id);
      }
    } else {
      sentence.assign(ids.begin(), ids.end());
    }

    for (std::size_t pos = 0; pos < sentence.size(); ++pos) {
      const std::uint64_t done = sh.processed.fetch_add(1, std::memory_order_relaxed);
      double lr = lr0 * (1.0 - static_cast<double>(done) /
                                   static_cast<double>(sh.planned_updates + 1));
      if (lr < lr_floor) lr = lr_floor;

      const std::uint32_t center = sentence[pos];
      const std::size_t span = hp.fixed_window
                                   ? static_cast<std::size_t>(hp.window)
                                   : 1 + rng.bounded(static_cast<std::uint64_t>(hp.window));
      const std::size_t lo = pos >= span ? pos - span : 0;
      const std::size_t hi = std::min(sentence.size(), pos + span + 1);
      for (std::size_t j = lo; j < hi; ++j) {
        if (j == pos) continue;
        const std::uint32_t context = sentence[j];
        negatives.clear();
        for (int n = 0; n < hp.negatives; ++n) {
          const std::uint32_t neg = sh.noise.sample(rng);
          if (neg == context) continue;  // never use the positive as a negative
          negatives.push_back(neg);
        }
        sgd_step(sh.model, center, context, negatives, lr);
        ++pair_updates;
      }

      if (constrained) {
        const auto& nbrs = sh.constraints->neighbors[center];
        if (!nbrs.empty()) {
          const auto cap = static_cast<std::size_t>(hp.constraint_neighbor_cap);
          if (nbrs.size() <= cap) {
            picked.assign(nbrs.begin(), nbrs.end());
          } else {
            // Floyd's sampling: cap distinct neighbors, deterministic in rng.
            picked.clear();
            for (std::size_t k = nbrs.size() - cap; k < nbrs.size(); ++k) {
              const std::size_t r = rng.bounded(k + 1);
              const std::uint32_t candidate = nbrs[r];
              if (std::find(picked.begin(), picked.end(), candidate) != picked.end()) {
                picked.push_back(nbrs[k]);
              } else {
                picked.push_back(candidate);
              }
            }
          }
          if (hp.symmetric_constraints) {
            thread_local std::vector<float> scratch;
            auto rows = gather_rows(sh.model, false, picked);
            detail::apply_constraint_step(sh.model.w_row(center), rows, hp.lambda, lr, true,
                                          scratch);
          } else {
            constraint_step(sh.model, center, picked, hp.lambda, lr);
          }
          ++constraint_updates;
        }
      }
    }
  }
  sh.pair_updates.fetch_add(pair_updates, std::memory_order_relaxed);
  sh.constraint_updates.fetch_add(constraint_updates, std::memory_order_relaxed);
}

}  // namespace

EmbeddingModel train(const std::vector<std::string>& contexts, const Vocabulary& vocab,
                     const ConstraintSet* constraints, const Hyperparams& hp,
                     TrainStats* stats) {
  if (contexts.empty()) throw ConfigError("training corpus is empty");
  if (vocab.size() == 0) throw ConfigError("vocabulary is empty");
  if (hp.window < 1) throw ConfigError("window must be >= 1");
  if (hp.negatives < 0) throw ConfigError("negatives must be >= 0");
  if (hp.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (hp.lambda < 0.0) throw ConfigError("lambda must be >= 0");

  // Encode once; OOV tokens are skipped and windows close over the gaps.
  std::vector<std::vector<std::uint32_t>> encoded;
  encoded.reserve(contexts.size());
  std::uint64_t positions = 0;
  for (const auto& line : contexts) {
    std::vector<std::uint32_t> ids;
    for (const auto& tok : split_ws(line)) {
      if (auto id = vocab.find(std::string(tok))) ids.push_back(*id);
    }
    positions += ids.size();
    encoded.push_back(std::move(ids));
  }
  if (positions == 0) {
    throw ConfigError("no corpus token is covered by the vocabulary");
  }

  EmbeddingModel model(vocab, hp.dim);
  init_model(model, hp.seed);

  std::vector<double> noise_weights(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    noise_weights[i] = std::pow(static_cast<double>(vocab.freqs[i]), hp.noise_power);
  }
  const AliasSampler noise(noise_weights);

  ResolvedConstraints resolved;
  if (constraints != nullptr) {
    resolved = resolve_constraints(*constraints, vocab);
  }

  TrainShared shared{encoded, model, hp, noise,
                     constraints != nullptr ? &resolved : nullptr,
                     positions * static_cast<std::uint64_t>(hp.epochs)};

  const int workers = std::max(1, hp.workers);
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    if (workers == 1) {
      train_span(shared, Rng::derive(hp.seed, kTrainStreamBase + epoch * 0x10000),
                 0, encoded.size());
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w) {
        const std::size_t begin = encoded.size() * w / workers;
        const std::size_t end = encoded.size() * (w + 1) / workers;
        pool.emplace_back([&shared, w, epoch, begin, end] {
          train_span(shared, Rng::derive(shared.hp.seed, kTrainStreamBase + epoch * 0x10000 + w),
                     begin, end);
        });
      }
      for (auto& t : pool) t.join();
    }
    model.check_finite();
  }

  if (stats != nullptr) {
    stats->pair_updates = shared.pair_updates.load();
    stats->constraint_updates = shared.constraint_updates.load();
    stats->constraint_pairs_used = resolved.matched_pairs;
    stats->constraint_pairs_dropped = resolved.dropped_pairs;
  }
  return model;
}

void save_model(const EmbeddingModel& model, const std::string& base) {
  save_vectors(model.w_table(), base + ".w.vec");
  save_vectors(model.c_table(), base + ".c.vec");
}

EmbeddingModel load_model(const std::string& base) {
  VectorTable w = load_vectors(base + ".w.vec");
  VectorTable c = load_vectors(base + ".c.vec");
  if (w.dim != c.dim || w.words != c.words) {
    throw ParseError("model halves disagree: " + base + ".w.vec vs " + base + ".c.vec");
  }
  Vocabulary vocab;
  vocab.min_count = 0;
  vocab.words = w.words;
  vocab.freqs.assign(w.words.size(), 0);
  for (std::uint32_t i = 0; i < vocab.words.size(); ++i) vocab.index.emplace(vocab.words[i], i);
  EmbeddingModel model(std::move(vocab), w.dim);
  for (std::uint32_t i = 0; i < w.words.size(); ++i) {
    auto wr = model.w_row(i);
    auto cr = model.c_row(i);
    const auto ws = w.row(i);
    const auto cs = c.row(i);
    std::copy(ws.begin(), ws.end(), wr.begin());
    std::copy(cs.begin(), cs.end(), cr.begin());
  }
  return model;
}

}  // namespace biwalk
