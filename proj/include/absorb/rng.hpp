#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace absorb {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the k-th independent stream derived from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
  return splitmix64(splitmix64(base) ^ (k * 0xd1b54a32d192ed03ULL + 1));
}

/// Seeded generator with platform-independent draws.
///
/// std::uniform_int_distribution and std::shuffle are implementation
/// defined, so all sampling goes through these helpers to keep artifacts
/// byte-identical for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound), bound > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    __uint128_t m = static_cast<__uint128_t>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

  template <class T>
  void shuffle(std::span<T> xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(xs[i - 1], xs[j]);
    }
  }

  template <class Container>
  void shuffle(Container& c) {
    shuffle(std::span(c.data(), c.size()));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace absorb
