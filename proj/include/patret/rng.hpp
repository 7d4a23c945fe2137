#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace patret {

// std::mt19937_64 is bit-specified by the standard, but the standard
// distributions are not. Reproducible outputs therefore go through the
// explicit mappings below instead of <random> distributions.
using Rng = std::mt19937_64;

// Derives an independent stream seed from a base seed and a stream tag
// (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Uniform in [0, 1) with 53 random bits.
inline double unit_real(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_real(rng);
}

// Uniform in [0, n), n > 0. Rejection sampling to avoid modulo bias.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t limit = ~0ull - ~0ull % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

// Standard normal via Box-Muller (no cached spare, so the draw count per
// call is fixed and the stream stays aligned).
inline double normal(Rng& rng, double mean = 0.0, double stddev = 1.0) {
  double u1 = unit_real(rng);
  while (u1 <= 0.0) u1 = unit_real(rng);
  const double u2 = unit_real(rng);
  const double r  = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
}

// Fisher-Yates; std::shuffle is implementation-defined, this is not.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = uniform_index(rng, i);
    std::swap(v[i - 1], v[j]);
  }
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  shuffle(idx, rng);
  return idx;
}

}  // namespace patret
