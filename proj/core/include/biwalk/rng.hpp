#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace biwalk {

// splitmix64 step; used to mix (seed, stream) into engine seeds so that
// per-block / per-worker streams are decorrelated.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a sub-seed from (seed, stream); used to give each pipeline stage
// or corpus operation its own deterministic seed.
inline std::uint64_t splitmix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (stream * 0xd6e8feb86659fd93ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(s);
}

// Deterministic RNG used everywhere randomness is needed. Wraps mt19937_64
// (whose sequence is pinned by the standard, unlike the distribution
// adaptors) and does bounded sampling with Lemire rejection so integer
// choices are unbiased and identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream derived from (seed, stream). Streams with different
  // indices never share an engine seed in practice.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
    std::uint64_t b = splitmix64(s);
    return Rng(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased uniform draw from [0, n). n must be > 0.
  std::uint64_t bounded(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[bounded(items.size())];
  }

  // In-place Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[bounded(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace biwalk
