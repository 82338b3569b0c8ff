#include "maxkvc/subspace.hpp"

#include <array>
#include <bit>
#include <stdexcept>

namespace maxkvc {

namespace {

// Pascal triangle up to n = 63; C(63, 31) fits comfortably in 64 bits.
constexpr int kTableSize = kMaxVertices + 1;

constexpr auto make_binomial_table() {
  std::array<std::array<std::uint64_t, kTableSize>, kTableSize> c{};
  for (int n = 0; n < kTableSize; ++n) {
    c[n][0] = 1;
    for (int k = 1; k <= n; ++k)
      c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
  }
  return c;
}

const auto kBinomial = make_binomial_table();

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n >= kTableSize) throw std::invalid_argument("binomial: n too large");
  return kBinomial[n][k];
}

SubspaceIndex::SubspaceIndex(int n, int k) : n_(n), k_(k) {
  if (n < 1 || n > kMaxVertices)
    throw std::invalid_argument("SubspaceIndex: n out of range");
  if (k < 0 || k > n)
    throw std::invalid_argument("SubspaceIndex: k outside [0, n]");
  dim_ = binomial(n, k);
}

std::uint64_t SubspaceIndex::rank(Bitstring x) const {
  if (std::popcount(x) != k_ || (n_ < 64 && (x >> n_) != 0))
    throw std::invalid_argument("rank: bitstring has wrong Hamming weight");
  // Colex rank: sum of C(position of j-th set bit, j+1).
  std::uint64_t r = 0;
  int j = 1;
  while (x != 0) {
    const int pos = std::countr_zero(x);
    r += binomial(pos, j++);
    x &= x - 1;
  }
  return r;
}

Bitstring SubspaceIndex::unrank(std::uint64_t i) const {
  if (i >= dim_) throw std::invalid_argument("unrank: index out of range");
  Bitstring x = 0;
  int c = n_ - 1;
  for (int j = k_; j >= 1; --j) {
    while (binomial(c, j) > i) --c;
    x |= Bitstring{1} << c;
    i -= binomial(c, j);
    --c;
  }
  return x;
}

}  // namespace maxkvc
