#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "maxkvc/operators.hpp"
#include "maxkvc/rng.hpp"
#include "maxkvc/state.hpp"

using namespace maxkvc;

namespace {

// Independent oracle: two weight-k states are coupled with element 2 iff
// they differ in exactly one occupied/unoccupied position pair that is an
// allowed mixer edge.
Eigen::MatrixXd exchange_oracle(const SubspaceIndex& index,
                                const std::vector<std::pair<int, int>>& pairs) {
  const auto dim = static_cast<Eigen::Index>(index.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index b = 0; b < dim; ++b) {
      const Bitstring x = index.unrank(a);
      const Bitstring y = index.unrank(b);
      const Bitstring diff = x ^ y;
      if (std::popcount(diff) != 2) continue;
      const int u = std::countr_zero(diff);
      const int v = std::countr_zero(diff & (diff - 1));
      for (const auto& [pu, pv] : pairs)
        if ((pu == u && pv == v) || (pu == v && pv == u)) m(a, b) = 2.0;
    }
  return m;
}

std::vector<std::pair<int, int>> ring_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    int u = i, v = (i + 1) % n;
    if (u > v) std::swap(u, v);
    if (std::find(pairs.begin(), pairs.end(), std::make_pair(u, v)) ==
        pairs.end())
      pairs.emplace_back(u, v);
  }
  return pairs;
}

std::vector<std::pair<int, int>> complete_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  return pairs;
}

StateVector random_state(const SubspaceIndex& index, std::uint64_t seed) {
  Rng rng(seed);
  StateVector state{index, Eigen::VectorXcd(static_cast<Eigen::Index>(index.dim()))};
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
    state.amplitudes(i) =
        Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  state.amplitudes /= state.amplitudes.norm();
  return state;
}

}  // namespace

TEST_SUITE("mixer-matrices") {
  TEST_CASE("ring and complete mixers match the exchange oracle") {
    for (int n = 2; n <= 8; ++n)
      for (int k = 1; k < n; ++k) {
        const SubspaceIndex index(n, k);
        const auto ring = build_ring_mixer(index, SpectrumPolicy::None);
        const auto complete = build_complete_mixer(index, SpectrumPolicy::None);
        const Eigen::MatrixXd ring_expected =
            exchange_oracle(index, ring_pairs(n));
        const Eigen::MatrixXd complete_expected =
            exchange_oracle(index, complete_pairs(n));
        CHECK((Eigen::MatrixXd(ring.matrix) - ring_expected).norm() == 0.0);
        CHECK((Eigen::MatrixXd(complete.matrix) - complete_expected).norm() ==
              0.0);
      }
  }

  TEST_CASE("two-vertex ring is a single exchange pair") {
    const auto mixer = build_ring_mixer(SubspaceIndex(2, 1));
    const Eigen::MatrixXd m(mixer.matrix);
    Eigen::MatrixXd expected(2, 2);
    expected << 0.0, 2.0, 2.0, 0.0;
    CHECK((m - expected).norm() == 0.0);
  }

  TEST_CASE("complete mixer row sums equal 2 k (n - k)") {
    for (int n = 3; n <= 9; ++n) {
      const int k = n / 2;
      const auto mixer =
          build_complete_mixer(SubspaceIndex(n, k), SpectrumPolicy::None);
      const Eigen::VectorXd ones =
          Eigen::VectorXd::Ones(static_cast<Eigen::Index>(mixer.index.dim()));
      const Eigen::VectorXd sums = mixer.matrix * ones;
      for (Eigen::Index i = 0; i < sums.size(); ++i)
        CHECK(sums(i) == doctest::Approx(2.0 * k * (n - k)).epsilon(1e-14));
    }
  }

  TEST_CASE("Dicke state is an eigenvector of both mixers") {
    for (int n = 3; n <= 8; ++n) {
      const int k = n / 2;
      const SubspaceIndex index(n, k);
      const StateVector dicke = dicke_state(index);
      const auto complete = build_complete_mixer(index, SpectrumPolicy::None);
      const Eigen::VectorXcd hk = complete.matrix * dicke.amplitudes;
      CHECK((hk - 2.0 * k * (n - k) * dicke.amplitudes).norm() <= 1e-12);
      if (k == 1) {
        const auto ring = build_ring_mixer(index, SpectrumPolicy::None);
        const Eigen::VectorXcd hr = ring.matrix * dicke.amplitudes;
        CHECK((hr - 4.0 * dicke.amplitudes).norm() <= 1e-12);
      }
    }
    // Weight-1 Dicke states see each vertex's two ring neighbours.
    const SubspaceIndex index(6, 1);
    const auto ring = build_ring_mixer(index, SpectrumPolicy::None);
    const StateVector dicke = dicke_state(index);
    CHECK((ring.matrix * dicke.amplitudes - 4.0 * dicke.amplitudes).norm() <=
          1e-12);
  }
}

TEST_SUITE("johnson-spectrum") {
  TEST_CASE("closed form for J(4,2)") {
    const auto lines = johnson_spectrum(4, 2);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].eigenvalue == 4.0);
    CHECK(lines[0].multiplicity == 1);
    CHECK(lines[1].eigenvalue == 0.0);
    CHECK(lines[1].multiplicity == 3);
    CHECK(lines[2].eigenvalue == -2.0);
    CHECK(lines[2].multiplicity == 2);
  }

  TEST_CASE("multiplicities sum to the dimension") {
    for (int n = 2; n <= 10; ++n)
      for (int k = 0; k <= n; ++k) {
        std::int64_t total = 0;
        for (const auto& line : johnson_spectrum(n, k))
          total += line.multiplicity;
        CHECK(static_cast<std::uint64_t>(total) == SubspaceIndex(n, k).dim());
      }
  }
}

TEST_SUITE("propagators") {
  TEST_CASE("spectral and series paths agree") {
    for (int n = 4; n <= 7; ++n) {
      const SubspaceIndex index(n, n / 2);
      const auto dense = build_ring_mixer(index, SpectrumPolicy::Dense);
      const auto series = build_ring_mixer(index, SpectrumPolicy::None);
      REQUIRE(dense.has_spectrum);
      REQUIRE_FALSE(series.has_spectrum);
      Rng rng(11 + static_cast<std::uint64_t>(n));
      for (int trial = 0; trial < 5; ++trial) {
        const StateVector state = random_state(index, rng.next_u64());
        const double beta = rng.uniform(-2.0, 2.0);
        const StateVector a = propagator_apply(dense, beta, state);
        const StateVector b = propagator_apply(series, beta, state);
        CHECK((a.amplitudes - b.amplitudes).norm() <= 1e-12);
        CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("zero angle is an exact identity") {
    const SubspaceIndex index(6, 3);
    const auto mixer = build_complete_mixer(index);
    const StateVector state = random_state(index, 5);
    const StateVector out = propagator_apply(mixer, 0.0, state);
    CHECK((out.amplitudes - state.amplitudes).norm() == 0.0);
  }

  TEST_CASE("phase application preserves probabilities") {
    const Graph g = gen_random_graph(6, 0.5, 21);
    const ProblemInstance instance(g, 3);
    const auto separator =
        build_phase_separator(instance, instance.index());
    const StateVector state = random_state(instance.index(), 9);
    const StateVector out = phase_apply(separator, 1.234, state);
    CHECK((out.amplitudes.cwiseAbs() - state.amplitudes.cwiseAbs()).norm() <=
          1e-14);
    // Phases are e^{-i gamma f(x)} per basis state.
    for (Eigen::Index i = 0; i < out.amplitudes.size(); ++i) {
      const double f = separator.diagonal(i);
      const Complex expected =
          state.amplitudes(i) * std::exp(Complex(0.0, -1.234 * f));
      CHECK(std::abs(out.amplitudes(i) - expected) <= 1e-14);
    }
  }
}

TEST_SUITE("periodicity-probe") {
  TEST_CASE("integer spectra with multiples of 4 are pi/2-periodic") {
    const auto report = probe_periodicity({0.0, 4.0, 8.0}, 10);
    CHECK(report.periodic);
    CHECK(report.best_d == 1);
  }

  TEST_CASE("even integer spectra are pi-periodic") {
    const auto report = probe_periodicity({-2.0, 0.0, 4.0, 6.0}, 10);
    CHECK(report.periodic);
    CHECK(report.best_d == 2);
  }

  TEST_CASE("irrational ratios defeat every candidate") {
    const auto report =
        probe_periodicity({0.0, std::numbers::sqrt2}, 1000);
    CHECK_FALSE(report.periodic);
    CHECK(report.best_deviation > 1e-6);
  }

  TEST_CASE("all-sector eigenvalue count is 2^n") {
    CHECK(all_sector_eigenvalues(MixerKind::Ring, 6).size() == 64);
    CHECK(all_sector_eigenvalues(MixerKind::CompleteGraph, 5).size() == 32);
  }
}
