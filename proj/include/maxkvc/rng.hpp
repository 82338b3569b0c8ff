#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace maxkvc {

// All randomness in the library flows through these helpers so that results
// are bit-reproducible for a given seed, independent of platform quirks in
// <random> distribution implementations.

/// SplitMix64 finalizer, used both as a bit mixer and for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a stable path of
/// integer keys (graph index, level, repetition, ...). Same path, same seed.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t key : path) s = splitmix64(s ^ splitmix64(key));
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [0, high).
  double uniform(double high) { return uniform01() * high; }

  /// Uniform double in [low, high).
  double uniform(double low, double high) {
    return low + uniform01() * (high - low);
  }

  /// Uniform integer in [0, n), unbiased via rejection sampling.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t threshold = -n % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = gen_();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace maxkvc
