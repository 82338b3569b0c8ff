#include "maxkvc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxkvc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Dense eigendecomposition is used up to this dimension (C(14,7) = 3432);
// beyond it the propagator falls back to series evaluation.
constexpr std::uint64_t kDenseSpectrumLimit = 4096;
// Reconstruction checks are O(dim^3); skip them for very large sectors.
constexpr std::uint64_t kSpectrumCheckLimit = 1024;

std::vector<std::pair<int, int>> ring_edges(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    int u = i, v = (i + 1) % n;
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::vector<std::pair<int, int>> complete_edges(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return edges;
}

Eigen::SparseMatrix<double> build_exchange_matrix(
    const SubspaceIndex& index, const std::vector<std::pair<int, int>>& pairs) {
  const auto dim = static_cast<Eigen::Index>(index.dim());
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Bitstring x = index.unrank(static_cast<std::uint64_t>(col));
    for (const auto& [u, v] : pairs) {
      const bool bu = (x >> u) & 1u, bv = (x >> v) & 1u;
      if (bu == bv) continue;
      const Bitstring y = x ^ (Bitstring{1} << u) ^ (Bitstring{1} << v);
      triplets.emplace_back(static_cast<Eigen::Index>(index.rank(y)), col, 2.0);
    }
  }
  Eigen::SparseMatrix<double> m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

void attach_spectrum(MixerOperator& mixer, SpectrumPolicy policy) {
  const std::uint64_t dim = mixer.index.dim();
  if (policy == SpectrumPolicy::None) return;
  if (policy == SpectrumPolicy::Auto && dim > kDenseSpectrumLimit) return;
  if (policy == SpectrumPolicy::Dense && dim > kDenseSpectrumLimit)
    throw std::length_error("attach_spectrum: dimension too large for dense");

  const Eigen::MatrixXd dense(mixer.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("attach_spectrum: eigendecomposition failed");
  mixer.eigenvalues = solver.eigenvalues();
  mixer.eigenvectors = solver.eigenvectors();
  mixer.has_spectrum = true;

  if (dim <= kSpectrumCheckLimit) {
    const Eigen::MatrixXd recon = mixer.eigenvectors *
                                  mixer.eigenvalues.asDiagonal() *
                                  mixer.eigenvectors.transpose();
    const double err = (recon - dense).cwiseAbs().maxCoeff();
    if (err > 1e-9)
      throw std::runtime_error("attach_spectrum: reconstruction error " +
                               std::to_string(err));
  }
}

MixerOperator build_xy_mixer(MixerKind kind, const SubspaceIndex& index,
                             SpectrumPolicy policy) {
  if (index.n() < 2)
    throw std::invalid_argument("build_mixer: need at least 2 qubits");
  const auto pairs = kind == MixerKind::Ring ? ring_edges(index.n())
                                             : complete_edges(index.n());
  MixerOperator mixer{kind, index, build_exchange_matrix(index, pairs), false,
                      {}, {}};
  attach_spectrum(mixer, policy);
  return mixer;
}

/// Max row sum of absolute values; bounds the spectral radius.
double infinity_norm(const Eigen::SparseMatrix<double>& m) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(m.rows());
  for (int col = 0; col < m.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it)
      row_sums[it.row()] += std::abs(it.value());
  return m.rows() == 0 ? 0.0 : row_sums.maxCoeff();
}

// exp(-i tau H) v by truncated Taylor series; requires |tau| * ||H|| <~ 1.
void taylor_step(const Eigen::SparseMatrix<double>& h, double tau,
                 Eigen::VectorXcd& v) {
  Eigen::VectorXd term_re = v.real(), term_im = v.imag();
  Eigen::VectorXcd acc = v;
  for (int t = 1; t <= 64; ++t) {
    const Eigen::VectorXd hr = h * term_re;
    const Eigen::VectorXd hi = h * term_im;
    const double c = tau / t;
    term_re = c * hi;   // -i * c * (hr + i hi) = c*hi - i*c*hr
    term_im = -c * hr;
    acc.real() += term_re;
    acc.imag() += term_im;
    const double term_norm =
        std::sqrt(term_re.squaredNorm() + term_im.squaredNorm());
    if (term_norm <= 1e-16 * acc.norm()) break;
  }
  v = acc;
}

double circular_distance(double a, double b) {
  double d = std::abs(a - b);
  if (d > std::numbers::pi) d = kTwoPi - d;
  return d;
}

}  // namespace

PhaseSeparator build_phase_separator(const ProblemInstance& instance,
                                     const SubspaceIndex& index) {
  if (!(instance.index() == index))
    throw std::invalid_argument("build_phase_separator: (n,k) mismatch");
  PhaseSeparator sep{Eigen::VectorXd(index.dim())};
  const auto& table = instance.objective_table();
  for (std::uint64_t i = 0; i < index.dim(); ++i)
    sep.diagonal[static_cast<Eigen::Index>(i)] = table[i];
  return sep;
}

const char* mixer_name(MixerKind kind) {
  return kind == MixerKind::Ring ? "ring" : "complete";
}

MixerKind mixer_from_name(const std::string& name) {
  if (name == "ring") return MixerKind::Ring;
  if (name == "complete") return MixerKind::CompleteGraph;
  throw std::invalid_argument("unknown mixer: " + name);
}

MixerOperator build_ring_mixer(const SubspaceIndex& index,
                               SpectrumPolicy policy) {
  return build_xy_mixer(MixerKind::Ring, index, policy);
}

MixerOperator build_complete_mixer(const SubspaceIndex& index,
                                   SpectrumPolicy policy) {
  return build_xy_mixer(MixerKind::CompleteGraph, index, policy);
}

MixerOperator build_mixer(MixerKind kind, const SubspaceIndex& index,
                          SpectrumPolicy policy) {
  return build_xy_mixer(kind, index, policy);
}

std::vector<SpectrumLine> johnson_spectrum(int n, int k) {
  if (k < 0 || k > n)
    throw std::invalid_argument("johnson_spectrum: k outside [0, n]");
  std::vector<SpectrumLine> lines;
  const int j_max = std::min(k, n - k);
  for (int j = 0; j <= j_max; ++j) {
    const double value = static_cast<double>(k - j) * (n - k - j) - j;
    const std::int64_t mult = static_cast<std::int64_t>(binomial(n, j)) -
                              (j > 0 ? static_cast<std::int64_t>(binomial(n, j - 1)) : 0);
    lines.push_back({value, mult});
  }
  return lines;
}

StateVector propagator_apply(const MixerOperator& mixer, double beta,
                             const StateVector& state) {
  if (!(mixer.index == state.index))
    throw std::invalid_argument("propagator_apply: dimension mismatch");
  if (beta == 0.0) return state;

  StateVector out{state.index, Eigen::VectorXcd(state.amplitudes.size())};
  if (mixer.has_spectrum) {
    const Eigen::MatrixXd& v = mixer.eigenvectors;
    const Eigen::VectorXd yr = v.transpose() * state.amplitudes.real();
    const Eigen::VectorXd yi = v.transpose() * state.amplitudes.imag();
    Eigen::VectorXcd y(yr.size());
    y.real() = yr;
    y.imag() = yi;
    const Eigen::ArrayXd phase = -beta * mixer.eigenvalues.array();
    y.array() *= (Complex(0.0, 1.0) * phase.cast<Complex>()).exp();
    out.amplitudes.real() = v * y.real();
    out.amplitudes.imag() = v * y.imag();
    return out;
  }

  // Series fallback: split beta into unit-sized sub-steps.
  const double rho = infinity_norm(mixer.matrix);
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(beta) * rho)));
  const double tau = beta / steps;
  Eigen::VectorXcd v = state.amplitudes;
  for (int s = 0; s < steps; ++s) taylor_step(mixer.matrix, tau, v);
  out.amplitudes = std::move(v);
  return out;
}

StateVector phase_apply(const PhaseSeparator& separator, double gamma,
                        const StateVector& state) {
  if (separator.diagonal.size() != state.amplitudes.size())
    throw std::invalid_argument("phase_apply: dimension mismatch");
  if (gamma == 0.0) return state;
  StateVector out = state;
  const Eigen::ArrayXcd phases =
      (Complex(0.0, -gamma) * separator.diagonal.array().cast<Complex>()).exp();
  out.amplitudes.array() *= phases;
  return out;
}

PeriodicityReport probe_periodicity(const std::vector<double>& eigenvalues,
                                    int d_max, double tolerance) {
  // Collapse numerically repeated eigenvalues; they contribute nothing.
  std::vector<double> distinct = eigenvalues;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](double a, double b) {
                               return std::abs(a - b) < 1e-12;
                             }),
                 distinct.end());

  PeriodicityReport report;
  report.best_deviation = std::numeric_limits<double>::infinity();
  std::vector<double> phases(distinct.size());
  for (int d = 1; d <= d_max; ++d) {
    const double x = std::numbers::pi * d / 2.0;
    double deviation = 0.0;
    if (distinct.size() > 1) {
      for (std::size_t i = 0; i < distinct.size(); ++i) {
        double ph = std::fmod(x * distinct[i], kTwoPi);
        if (ph < 0.0) ph += kTwoPi;
        phases[i] = ph;
      }
      std::sort(phases.begin(), phases.end());
      // Max pairwise circular distance: for each phase, the farthest other
      // phase is the one nearest its antipode.
      for (std::size_t i = 0; i < phases.size(); ++i) {
        double target = phases[i] + std::numbers::pi;
        if (target >= kTwoPi) target -= kTwoPi;
        const auto it =
            std::lower_bound(phases.begin(), phases.end(), target);
        for (const auto cand :
             {it == phases.end() ? phases.begin() : it,
              it == phases.begin() ? phases.end() - 1 : it - 1}) {
          const double gap_to_antipode = circular_distance(*cand, target);
          const double dist = std::numbers::pi - gap_to_antipode;
          deviation = std::max(deviation, dist);
        }
      }
    }
    report.candidates.push_back({d, deviation});
    if (deviation < report.best_deviation) {
      report.best_deviation = deviation;
      report.best_d = d;
    }
    if (deviation < tolerance) report.periodic = true;
  }
  return report;
}

std::vector<double> all_sector_eigenvalues(MixerKind kind, int n) {
  std::vector<double> values;
  for (int k = 0; k <= n; ++k) {
    const SubspaceIndex index(n, k);
    const auto mixer = build_mixer(kind, index, SpectrumPolicy::Dense);
    values.insert(values.end(), mixer.eigenvalues.begin(),
                  mixer.eigenvalues.end());
  }
  return values;
}

PeriodicityReport ring_periodicity_probe(const SubspaceIndex& index, int d_max,
                                         bool all_sectors, double tolerance) {
  std::vector<double> values;
  if (all_sectors) {
    values = all_sector_eigenvalues(MixerKind::Ring, index.n());
  } else {
    const auto mixer = build_ring_mixer(index, SpectrumPolicy::Dense);
    values.assign(mixer.eigenvalues.begin(), mixer.eigenvalues.end());
  }
  return probe_periodicity(values, d_max, tolerance);
}

}  // namespace maxkvc
