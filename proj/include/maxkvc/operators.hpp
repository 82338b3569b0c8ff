#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "maxkvc/instance.hpp"
#include "maxkvc/state.hpp"
#include "maxkvc/subspace.hpp"

namespace maxkvc {

/// Diagonal of the cost Hamiltonian on the weight-k basis: entry i is the
/// objective value of the i-th basis state.
struct PhaseSeparator {
  Eigen::VectorXd diagonal;
};

PhaseSeparator build_phase_separator(const ProblemInstance& instance,
                                     const SubspaceIndex& index);

enum class MixerKind { Ring, CompleteGraph };

const char* mixer_name(MixerKind kind);
MixerKind mixer_from_name(const std::string& name);

/// How the mixer propagator is realized.
enum class SpectrumPolicy {
  Auto,   // dense eigendecomposition when the dimension permits
  Dense,  // always decompose (throws if too large)
  None,   // skip; propagation falls back to series evaluation
};

/// XY mixer restricted to the weight-k sector. The matrix couples basis
/// states two bit-flips apart (one exchange across an allowed qubit pair)
/// with matrix element 2. When the spectrum is cached, the propagator is
/// evaluated exactly as V e^{-i beta Lambda} V^T.
struct MixerOperator {
  MixerKind kind;
  SubspaceIndex index;
  Eigen::SparseMatrix<double> matrix;
  bool has_spectrum = false;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Exchange terms on the cycle (0,1), (1,2), ..., (n-1,0). The edge set is
/// deduplicated, so n=2 contributes a single pair.
MixerOperator build_ring_mixer(const SubspaceIndex& index,
                               SpectrumPolicy policy = SpectrumPolicy::Auto);

/// Exchange terms on all qubit pairs; in the weight-k sector this is twice
/// the adjacency matrix of the Johnson graph J(n,k).
MixerOperator build_complete_mixer(
    const SubspaceIndex& index, SpectrumPolicy policy = SpectrumPolicy::Auto);

MixerOperator build_mixer(MixerKind kind, const SubspaceIndex& index,
                          SpectrumPolicy policy = SpectrumPolicy::Auto);

struct SpectrumLine {
  double eigenvalue;
  std::int64_t multiplicity;
};

/// Closed-form spectrum of the Johnson graph J(n,k): eigenvalue
/// (k-j)(n-k-j)-j with multiplicity C(n,j)-C(n,j-1), j = 0..min(k, n-k).
/// Sorted by descending eigenvalue; multiplicities sum to C(n,k).
std::vector<SpectrumLine> johnson_spectrum(int n, int k);

/// Applies e^{-i beta H} to the state. Uses the cached spectrum when
/// available, otherwise a sub-stepped Taylor series on the sparse matrix.
StateVector propagator_apply(const MixerOperator& mixer, double beta,
                             const StateVector& state);

/// Applies e^{-i gamma f(x)} phases per basis state.
StateVector phase_apply(const PhaseSeparator& separator, double gamma,
                        const StateVector& state);

struct PeriodCandidate {
  int d;             // candidate period x = pi * d / 2
  double deviation;  // max over eigenvalue pairs, distance of x*(li - lj)
                     // from the nearest multiple of 2*pi
};

struct PeriodicityReport {
  std::vector<PeriodCandidate> candidates;
  bool periodic = false;  // some candidate beat the tolerance
  int best_d = 0;
  double best_deviation = 0.0;
};

/// Tests candidate periods x = pi*d/2, d = 1..d_max, against a list of
/// Hamiltonian eigenvalues. A period exists iff all eigenvalue differences
/// scaled by x land on multiples of 2*pi within the tolerance.
PeriodicityReport probe_periodicity(const std::vector<double>& eigenvalues,
                                    int d_max, double tolerance = 1e-6);

/// Eigenvalues of the given mixer across all Hamming-weight sectors
/// k = 0..n, i.e. the spectrum of the full 2^n operator.
std::vector<double> all_sector_eigenvalues(MixerKind kind, int n);

/// Aperiodicity probe for one sector or (with all_sectors) the full mixer.
PeriodicityReport ring_periodicity_probe(const SubspaceIndex& index, int d_max,
                                         bool all_sectors = true,
                                         double tolerance = 1e-6);

}  // namespace maxkvc
