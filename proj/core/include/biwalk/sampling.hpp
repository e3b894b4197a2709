#pragma once

#include <cstdint>
#include <vector>

#include "biwalk/rng.hpp"

namespace biwalk {

// Walker alias method: exact O(1) sampling from a fixed discrete
// distribution proportional to the given weights.
class AliasSampler {
 public:
  explicit AliasSampler(const std::vector<double>& weights);

  std::uint32_t sample(Rng& rng) const {
    const auto k = static_cast<std::uint32_t>(rng.bounded(prob_.size()));
    return rng.real() < prob_[k] ? k : alias_[k];
  }

  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace biwalk
