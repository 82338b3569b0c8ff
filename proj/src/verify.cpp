#include "maxkvc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>

#include "maxkvc/engine.hpp"
#include "maxkvc/full_space.hpp"
#include "maxkvc/operators.hpp"
#include "maxkvc/optimize.hpp"
#include "maxkvc/parallel.hpp"
#include "maxkvc/rng.hpp"

namespace maxkvc {

namespace {

std::string scientific(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

AngleSchedule random_schedule(Rng& rng, int p) {
  AngleSchedule s;
  for (int i = 0; i < p; ++i) {
    s.gammas.push_back(rng.uniform(2.0 * std::numbers::pi));
    s.betas.push_back(rng.uniform(std::numbers::pi / 2.0));
  }
  return s;
}

}  // namespace

CheckResult check_johnson_spectrum(int n_max, double tol) {
  CheckResult result;
  result.name = "johnson-spectrum";
  double worst = 0.0;
  for (int n = 2; n <= n_max; ++n)
    for (int k = 0; k <= n; ++k) {
      const SubspaceIndex index(n, k);
      const auto mixer =
          build_complete_mixer(index, SpectrumPolicy::Dense);
      // Expand the closed form (times 2) into a sorted list.
      std::vector<double> expected;
      for (const auto& line : johnson_spectrum(n, k))
        for (std::int64_t m = 0; m < line.multiplicity; ++m)
          expected.push_back(2.0 * line.eigenvalue);
      std::sort(expected.begin(), expected.end());
      if (static_cast<std::uint64_t>(expected.size()) != index.dim()) {
        result.detail = "multiplicities do not sum to the dimension at n=" +
                        std::to_string(n) + " k=" + std::to_string(k);
        return result;
      }
      std::vector<double> computed(mixer.eigenvalues.begin(),
                                   mixer.eigenvalues.end());
      std::sort(computed.begin(), computed.end());
      for (std::size_t i = 0; i < expected.size(); ++i)
        worst = std::max(worst, std::abs(computed[i] - expected[i]));
      // Exact multiplicity check: count computed eigenvalues near each
      // distinct closed-form value (values are even integers, gap >= 2).
      for (const auto& line : johnson_spectrum(n, k)) {
        std::int64_t count = 0;
        for (const double ev : computed)
          if (std::abs(ev - 2.0 * line.eigenvalue) < 0.5) ++count;
        if (count != line.multiplicity) {
          result.detail = "multiplicity mismatch at n=" + std::to_string(n) +
                          " k=" + std::to_string(k) +
                          " eigenvalue=" + std::to_string(2 * line.eigenvalue);
          return result;
        }
      }
    }
  result.passed = worst < tol;
  result.detail = "max eigenvalue deviation " + scientific(worst) + " (tol " +
                  scientific(tol) + "), n <= " + std::to_string(n_max);
  return result;
}

CheckResult check_complete_mixer_period(int n_max, double tol) {
  CheckResult result;
  result.name = "complete-mixer-period";
  double worst = 0.0;
  for (int n = 2; n <= n_max; ++n)
    for (int k = 0; k <= n; ++k) {
      const SubspaceIndex index(n, k);
      const auto mixer =
          build_complete_mixer(index, SpectrumPolicy::Dense);
      const auto dim = static_cast<Eigen::Index>(index.dim());
      Eigen::VectorXcd phases(dim);
      for (Eigen::Index i = 0; i < dim; ++i)
        phases(i) = std::exp(std::complex<double>(
            0.0, -std::numbers::pi * mixer.eigenvalues(i)));
      const Eigen::MatrixXcd propagator =
          mixer.eigenvectors.cast<std::complex<double>>() *
          phases.asDiagonal() *
          mixer.eigenvectors.transpose().cast<std::complex<double>>();
      const std::complex<double> phase =
          propagator(0, 0) / std::abs(propagator(0, 0));
      const double deviation =
          (propagator - phase * Eigen::MatrixXcd::Identity(dim, dim))
              .cwiseAbs()
              .maxCoeff();
      worst = std::max(worst, deviation);
    }
  result.passed = worst < tol;
  result.detail = "max |e^{-i pi H} - phase * I| " + scientific(worst) +
                  " (tol " + scientific(tol) + "), n <= " +
                  std::to_string(n_max);
  return result;
}

CheckResult check_ring_aperiodicity(int d_max, double tol) {
  CheckResult result;
  result.name = "ring-aperiodicity";
  for (int n = 4; n <= 10; ++n) {
    const auto report =
        ring_periodicity_probe(SubspaceIndex(n, n / 2), d_max, true, tol);
    if (report.periodic) {
      result.detail = "ring mixer n=" + std::to_string(n) +
                      " unexpectedly periodic at d=" +
                      std::to_string(report.best_d);
      return result;
    }
  }
  for (int n = 2; n <= 3; ++n) {
    const auto report =
        ring_periodicity_probe(SubspaceIndex(n, n / 2), d_max, true, tol);
    if (!report.periodic) {
      result.detail =
          "ring mixer n=" + std::to_string(n) + " period not found";
      return result;
    }
  }
  for (int n = 2; n <= 10; ++n) {
    const auto report =
        probe_periodicity(all_sector_eigenvalues(MixerKind::CompleteGraph, n),
                          d_max, tol);
    if (!report.periodic || report.best_d > 2) {
      result.detail = "complete mixer n=" + std::to_string(n) +
                      " period at most pi not confirmed";
      return result;
    }
  }
  result.passed = true;
  result.detail = "no ring period x = pi d/2, d <= " + std::to_string(d_max) +
                  ", n in [4,10]; periods found for n=2,3 and complete mixer";
  return result;
}

CheckResult check_full_space_equivalence(int cases, std::uint64_t seed,
                                         unsigned threads, double tol) {
  CheckResult result;
  result.name = "full-space-equivalence";

  // The references are expensive to build; share them across cases.
  std::map<std::pair<int, int>, std::unique_ptr<FullSpaceReference>> refs;
  for (int n = 2; n <= FullSpaceReference::kMaxQubits; ++n)
    for (const MixerKind kind : {MixerKind::Ring, MixerKind::CompleteGraph})
      refs.emplace(std::make_pair(n, static_cast<int>(kind)),
                   std::make_unique<FullSpaceReference>(n, kind));

  std::vector<double> value_dev(static_cast<std::size_t>(cases), 0.0);
  std::vector<double> occupation_dev(static_cast<std::size_t>(cases), 0.0);
  parallel_for(static_cast<std::size_t>(cases), threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, {0xF5, i}));
    const int n = 2 + static_cast<int>(rng.uniform_index(7));
    const int k =
        1 + static_cast<int>(rng.uniform_index(
                static_cast<std::uint64_t>(std::max(1, n - 1))));
    const Graph graph = gen_random_graph(n, 0.5, rng.next_u64());
    const MixerKind kind =
        (i % 2 == 0) ? MixerKind::CompleteGraph : MixerKind::Ring;
    const int p = 1 + static_cast<int>(rng.uniform_index(3));
    const AngleSchedule schedule = random_schedule(rng, p);
    const bool use_dicke = (i / 2) % 2 == 0;

    const QaoaSystem system = make_system(ProblemInstance(graph, k), kind);
    const SubspaceIndex& index = system.index();
    const Bitstring x = index.unrank(rng.uniform_index(index.dim()));
    const StateVector initial =
        use_dicke ? dicke_state(index) : basis_k_state(index, x);
    const double subspace_value = evaluate_fp(system, initial, schedule);

    const auto& ref = refs.at({n, static_cast<int>(kind)});
    const FullSpaceReference::Result full =
        use_dicke ? ref->run_dicke(graph, k, schedule)
                  : ref->run_basis(graph, x, schedule);
    value_dev[i] = std::abs(subspace_value - full.expectation);
    occupation_dev[i] = std::abs(full.min_sector_occupation - 1.0);
  });

  const double worst_value =
      *std::max_element(value_dev.begin(), value_dev.end());
  const double worst_occ =
      *std::max_element(occupation_dev.begin(), occupation_dev.end());
  result.passed = worst_value < tol && worst_occ < tol;
  result.detail = "max |F_sub - F_full| " + scientific(worst_value) +
                  ", max |occupation - 1| " + scientific(worst_occ) +
                  " (tol " + scientific(tol) + ") over " +
                  std::to_string(cases) + " cases";
  return result;
}

CheckResult check_symmetries(int cases, std::uint64_t seed, unsigned threads,
                             double tol) {
  CheckResult result;
  result.name = "schedule-symmetries";
  std::vector<double> devs(static_cast<std::size_t>(cases), 0.0);
  parallel_for(static_cast<std::size_t>(cases), threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, {0x57, i}));
    const int n = 4 + static_cast<int>(rng.uniform_index(6));  // 4..9
    const int k = 1 + static_cast<int>(rng.uniform_index(
                          static_cast<std::uint64_t>(n - 1)));
    const Graph graph = gen_random_graph(n, 0.5, rng.next_u64());
    const MixerKind kind =
        (i % 2 == 0) ? MixerKind::CompleteGraph : MixerKind::Ring;
    const int p = 1 + static_cast<int>(rng.uniform_index(4));
    const AngleSchedule schedule = random_schedule(rng, p);

    const QaoaSystem system = make_system(ProblemInstance(graph, k), kind);
    const SubspaceIndex& index = system.index();
    const StateVector initial =
        (i / 2) % 2 == 0
            ? dicke_state(index)
            : basis_k_state(index, index.unrank(rng.uniform_index(index.dim())));
    const double base = evaluate_fp(system, initial, schedule);

    AngleSchedule reversed = schedule;
    for (auto& g : reversed.gammas) g = -g;
    for (auto& b : reversed.betas) b = -b;
    double dev = std::abs(evaluate_fp(system, initial, reversed) - base);

    if (kind == MixerKind::CompleteGraph) {
      AngleSchedule reflected = schedule;
      for (auto& g : reflected.gammas) g = 2.0 * std::numbers::pi - g;
      for (auto& b : reflected.betas) b = std::numbers::pi - b;
      dev = std::max(dev,
                     std::abs(evaluate_fp(system, initial, reflected) - base));
    }
    devs[i] = dev;
  });
  const double worst = *std::max_element(devs.begin(), devs.end());
  result.passed = worst < tol;
  result.detail = "max symmetry deviation " + scientific(worst) + " (tol " +
                  scientific(tol) + ") over " + std::to_string(cases) +
                  " cases";
  return result;
}

CheckResult check_mixed_state_constancy(int cases, std::uint64_t seed,
                                        double tol) {
  CheckResult result;
  result.name = "mixed-state-constancy";
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    Rng rng(derive_seed(seed, {0x6D, static_cast<std::uint64_t>(i)}));
    const int n = 4 + static_cast<int>(rng.uniform_index(5));  // 4..8
    const int k = n / 2;
    const Graph graph = gen_random_graph(n, 0.5, rng.next_u64());
    const MixerKind kind =
        (i % 2 == 0) ? MixerKind::CompleteGraph : MixerKind::Ring;
    const int p = 1 + static_cast<int>(rng.uniform_index(3));
    const AngleSchedule schedule = random_schedule(rng, p);

    const QaoaSystem system = make_system(ProblemInstance(graph, k), kind);
    const SubspaceIndex& index = system.index();
    double value_sum = 0.0;
    double objective_sum = 0.0;
    for (std::uint64_t r = 0; r < index.dim(); ++r) {
      const Bitstring x = index.unrank(r);
      value_sum +=
          evaluate_fp(system, basis_k_state(index, x), schedule);
      objective_sum += graph.objective(x);
    }
    const double dim = static_cast<double>(index.dim());
    worst = std::max(worst, std::abs(value_sum / dim - objective_sum / dim));
  }
  result.passed = worst < tol;
  result.detail = "max |mean F_p - mean f| " + scientific(worst) + " (tol " +
                  scientific(tol) + ") over " + std::to_string(cases) +
                  " cases";
  return result;
}

CheckResult check_zero_padding(int cases, std::uint64_t seed, double tol) {
  CheckResult result;
  result.name = "zero-padding";
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    Rng rng(derive_seed(seed, {0x5A, static_cast<std::uint64_t>(i)}));
    const int n = 4 + static_cast<int>(rng.uniform_index(5));
    const int k = 1 + static_cast<int>(rng.uniform_index(
                          static_cast<std::uint64_t>(n - 1)));
    const Graph graph = gen_random_graph(n, 0.5, rng.next_u64());
    const MixerKind kind =
        (i % 2 == 0) ? MixerKind::CompleteGraph : MixerKind::Ring;
    const int p = 1 + static_cast<int>(rng.uniform_index(3));
    const AngleSchedule schedule = random_schedule(rng, p);

    const QaoaSystem system = make_system(ProblemInstance(graph, k), kind);
    const StateVector initial = dicke_state(system.index());
    const double base = evaluate_fp(system, initial, schedule);

    const double appended = evaluate_fp(system, initial, zero_pad(schedule));
    AngleSchedule prepended = schedule;
    prepended.gammas.insert(prepended.gammas.begin(), 0.0);
    prepended.betas.insert(prepended.betas.begin(), 0.0);
    const double front = evaluate_fp(system, initial, prepended);
    worst = std::max({worst, std::abs(appended - base),
                      std::abs(front - base)});
  }
  result.passed = worst < tol;
  result.detail = "max padding deviation " + scientific(worst) + " (tol " +
                  scientific(tol) + ") over " + std::to_string(cases) +
                  " cases";
  return result;
}

CheckResult check_reference_monotonicity(std::uint64_t seed,
                                         unsigned threads) {
  (void)threads;
  CheckResult result;
  result.name = "reference-monotonicity";
  double worst_drop = 0.0;
  for (int g = 0; g < 3; ++g) {
    const Graph graph =
        gen_random_graph(7, 0.5, derive_seed(seed, {0x4D, static_cast<std::uint64_t>(g)}));
    const ProblemInstance instance(graph, 3);
    if (instance.max_value() == 0) continue;
    const QaoaSystem system =
        make_system(instance, g % 2 == 0 ? MixerKind::CompleteGraph
                                         : MixerKind::Ring);
    const StateVector initial = dicke_state(system.index());
    LadderOptions options;
    options.p_max = 4;
    options.per_level_budget = 80;
    options.hops = 2;
    options.restarts = 1;
    const auto ladder = warmstart_ladder(system, initial, options,
                                         derive_seed(seed, {0x4E, static_cast<std::uint64_t>(g)}));
    for (std::size_t i = 1; i < ladder.size(); ++i)
      worst_drop = std::max(
          worst_drop, ladder[i - 1].best_value - ladder[i].best_value);
  }
  result.passed = worst_drop <= 1e-12;
  result.detail = "worst level-to-level drop " + scientific(worst_drop) +
                  " (must be <= 1e-12)";
  return result;
}

VerifyReport run_verify_suite(std::uint64_t seed, unsigned threads) {
  VerifyReport report;
  report.checks.push_back(check_johnson_spectrum());
  report.checks.push_back(check_complete_mixer_period());
  report.checks.push_back(check_ring_aperiodicity());
  report.checks.push_back(
      check_full_space_equivalence(100, derive_seed(seed, {1}), threads));
  report.checks.push_back(
      check_symmetries(100, derive_seed(seed, {2}), threads));
  report.checks.push_back(
      check_mixed_state_constancy(10, derive_seed(seed, {3})));
  report.checks.push_back(check_zero_padding(50, derive_seed(seed, {4})));
  report.checks.push_back(
      check_reference_monotonicity(derive_seed(seed, {5}), threads));
  return report;
}

}  // namespace maxkvc
