#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>

#include "maxkvc/subspace.hpp"

namespace maxkvc {

using Complex = std::complex<double>;

/// Complex amplitudes over the weight-k basis in SubspaceIndex order.
struct StateVector {
  SubspaceIndex index;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }

  /// Debug form: {"n":..,"k":..,"re":[..],"im":[..]} in basis order.
  std::string to_json() const;
  static StateVector from_json(const std::string& text);
};

/// |D_k^n>: every weight-k basis state with amplitude 1/sqrt(C(n,k)).
StateVector dicke_state(const SubspaceIndex& index);

/// Computational basis state |x>, weight of x must be k.
StateVector basis_k_state(const SubspaceIndex& index, Bitstring x);

/// Basis state of a uniformly random weight-k bitstring.
StateVector random_k_state(const SubspaceIndex& index, std::uint64_t seed);

}  // namespace maxkvc
