#pragma once

#include <cstdint>

#include "maxkvc/graph.hpp"

namespace maxkvc {

/// C(n, k), exact in 64 bits for n <= 63. Returns 0 for k < 0 or k > n.
std::uint64_t binomial(int n, int k);

/// Indexing of the Hamming-weight-k basis on n bits. Basis states are ordered
/// colexicographically, which for fixed weight coincides with numeric order
/// of the packed words. rank/unrank are mutually inverse and O(n).
class SubspaceIndex {
 public:
  SubspaceIndex(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t dim() const { return dim_; }

  /// Position of a weight-k bitstring in the basis order.
  std::uint64_t rank(Bitstring x) const;

  /// Inverse of rank.
  Bitstring unrank(std::uint64_t i) const;

  bool operator==(const SubspaceIndex& other) const {
    return n_ == other.n_ && k_ == other.k_;
  }

 private:
  int n_;
  int k_;
  std::uint64_t dim_;
};

}  // namespace maxkvc
