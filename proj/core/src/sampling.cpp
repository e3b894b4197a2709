#include "biwalk/sampling.hpp"

#include "biwalk/errors.hpp"

namespace biwalk {

AliasSampler::AliasSampler(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw ConfigError("alias sampler needs at least one weight");
  prob_.resize(n);
  alias_.resize(n);
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ConfigError("alias sampler weights must be non-negative");
    total += w;
  }
  if (total <= 0.0) throw ConfigError("alias sampler weights sum to zero");
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    const std::uint32_t l = large.back();
    small.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t i : large) prob_[i] = 1.0;
  for (std::uint32_t i : small) prob_[i] = 1.0;  // numerical leftovers
}

}  // namespace biwalk
