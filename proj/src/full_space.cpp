#include "maxkvc/full_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace maxkvc {

namespace {

using Matrix2 = Eigen::Matrix2cd;

Matrix2 pauli_x() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return m;
}

Matrix2 pauli_y() {
  Matrix2 m;
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix2 pauli_z() {
  Matrix2 m;
  m << 1, 0, 0, -1;
  return m;
}

Matrix2 identity2() { return Matrix2::Identity(); }

/// Tensor product over qubits with factor `factors[q]` acting on qubit q,
/// where qubit q is bit q of the basis index: entry (r, c) is the product of
/// the per-qubit matrix elements.
Eigen::MatrixXcd tensor_product(const std::vector<Matrix2>& factors) {
  const int n = static_cast<int>(factors.size());
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      Complex value = 1.0;
      for (int q = 0; q < n && value != Complex{}; ++q)
        value *= factors[q]((r >> q) & 1, (c >> q) & 1);
      out(r, c) = value;
    }
  return out;
}

Eigen::MatrixXcd two_qubit_term(int n, int u, int v, const Matrix2& a,
                                const Matrix2& b) {
  std::vector<Matrix2> factors(n, identity2());
  factors[u] = a;
  factors[v] = b;
  return tensor_product(factors);
}

Eigen::MatrixXcd one_qubit_term(int n, int u, const Matrix2& a) {
  std::vector<Matrix2> factors(n, identity2());
  factors[u] = a;
  return tensor_product(factors);
}

Eigen::MatrixXcd build_full_mixer(int n, MixerKind kind) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<std::pair<int, int>> pairs;
  if (kind == MixerKind::Ring) {
    for (int i = 0; i < n; ++i) {
      int u = i, v = (i + 1) % n;
      if (u > v) std::swap(u, v);
      if (std::find(pairs.begin(), pairs.end(), std::make_pair(u, v)) ==
          pairs.end())
        pairs.emplace_back(u, v);
    }
  } else {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  }
  for (const auto& [u, v] : pairs) {
    h += two_qubit_term(n, u, v, pauli_x(), pauli_x());
    h += two_qubit_term(n, u, v, pauli_y(), pauli_y());
  }
  return h;
}

}  // namespace

Eigen::VectorXd FullSpaceReference::phase_diagonal_from_paulis(
    const Graph& graph) {
  const int n = graph.n_vertices();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& [u, v] : graph.edges()) {
    h += 0.25 * (3.0 * id - two_qubit_term(n, u, v, pauli_z(), pauli_z()) -
                 one_qubit_term(n, u, pauli_z()) -
                 one_qubit_term(n, v, pauli_z()));
  }
  return h.diagonal().real();
}

FullSpaceReference::FullSpaceReference(int n, MixerKind kind)
    : n_(n), dim_(Eigen::Index{1} << n) {
  if (n < 2 || n > kMaxQubits)
    throw std::length_error("FullSpaceReference: n outside [2, 8]");
  const Eigen::MatrixXcd h = build_full_mixer(n, kind);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("FullSpaceReference: eigensolver failed");
  mixer_eigenvalues_ = solver.eigenvalues();
  mixer_eigenvectors_ = solver.eigenvectors();
}

FullSpaceReference::Result FullSpaceReference::run(
    const Graph& graph, int k, Eigen::VectorXcd psi,
    const AngleSchedule& schedule) const {
  schedule.validate();
  if (graph.n_vertices() != n_)
    throw std::invalid_argument("FullSpaceReference: vertex count mismatch");
  const Eigen::VectorXd diag = phase_diagonal_from_paulis(graph);

  const auto sector_occupation = [&](const Eigen::VectorXcd& v) {
    double occ = 0.0;
    for (Eigen::Index x = 0; x < dim_; ++x)
      if (std::popcount(static_cast<std::uint64_t>(x)) == k)
        occ += std::norm(v[x]);
    return occ;
  };

  Result result;
  result.min_sector_occupation = sector_occupation(psi);
  for (int round = 0; round < schedule.p(); ++round) {
    const Eigen::ArrayXcd phases =
        (Complex(0, -schedule.gammas[round]) * diag.array().cast<Complex>())
            .exp();
    psi.array() *= phases;
    result.min_sector_occupation =
        std::min(result.min_sector_occupation, sector_occupation(psi));

    const Eigen::VectorXcd y = mixer_eigenvectors_.adjoint() * psi;
    const Eigen::ArrayXcd mixer_phases =
        (Complex(0, -schedule.betas[round]) *
         mixer_eigenvalues_.array().cast<Complex>())
            .exp();
    psi = mixer_eigenvectors_ * (y.array() * mixer_phases).matrix();
    result.min_sector_occupation =
        std::min(result.min_sector_occupation, sector_occupation(psi));
  }
  result.expectation = diag.dot(psi.cwiseAbs2());
  return result;
}

FullSpaceReference::Result FullSpaceReference::run_dicke(
    const Graph& graph, int k, const AngleSchedule& schedule) const {
  std::vector<Eigen::Index> members;
  for (Eigen::Index x = 0; x < dim_; ++x)
    if (std::popcount(static_cast<std::uint64_t>(x)) == k) members.push_back(x);
  if (members.empty())
    throw std::invalid_argument("run_dicke: empty weight sector");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim_);
  const double amp = 1.0 / std::sqrt(static_cast<double>(members.size()));
  for (const auto x : members) psi[x] = amp;
  return run(graph, k, std::move(psi), schedule);
}

FullSpaceReference::Result FullSpaceReference::run_basis(
    const Graph& graph, Bitstring x, const AngleSchedule& schedule) const {
  if (x >= (Bitstring{1} << n_))
    throw std::invalid_argument("run_basis: bitstring out of range");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim_);
  psi[static_cast<Eigen::Index>(x)] = 1.0;
  return run(graph, std::popcount(x), std::move(psi), schedule);
}

}  // namespace maxkvc
