#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "maxkvc/engine.hpp"
#include "maxkvc/graph.hpp"

namespace maxkvc {

/// Brute-force 2^n simulator used as an equivalence oracle for the subspace
/// engine. Operators are assembled from explicit Pauli tensor products
/// (qubit i maps to bit i of the basis index) and exponentiated by dense
/// eigendecomposition; nothing is shared with the subspace code path.
class FullSpaceReference {
 public:
  static constexpr int kMaxQubits = 8;

  FullSpaceReference(int n, MixerKind kind);

  struct Result {
    double expectation = 0.0;
    /// Smallest weight-k sector occupation observed after any step.
    double min_sector_occupation = 1.0;
  };

  /// Evolves the Dicke state of weight k under the full-space operators.
  Result run_dicke(const Graph& graph, int k,
                   const AngleSchedule& schedule) const;

  /// Evolves a single computational basis state (weight of x defines k).
  Result run_basis(const Graph& graph, Bitstring x,
                   const AngleSchedule& schedule) const;

  /// Diagonal of the full-space cost Hamiltonian built from its Pauli-Z
  /// expansion, length 2^n.
  static Eigen::VectorXd phase_diagonal_from_paulis(const Graph& graph);

  int n() const { return n_; }

 private:
  Result run(const Graph& graph, int k, Eigen::VectorXcd psi,
             const AngleSchedule& schedule) const;

  int n_;
  Eigen::Index dim_;
  Eigen::VectorXd mixer_eigenvalues_;
  Eigen::MatrixXcd mixer_eigenvectors_;
};

}  // namespace maxkvc
