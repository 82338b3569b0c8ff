#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

#include "maxkvc/instance.hpp"
#include "maxkvc/operators.hpp"
#include "maxkvc/state.hpp"

namespace maxkvc {

/// Per-round angles: gamma drives the phase separator, beta the mixer.
struct AngleSchedule {
  std::vector<double> gammas;
  std::vector<double> betas;

  int p() const { return static_cast<int>(gammas.size()); }
  void validate() const;
};

/// Half-open angle ranges searched by the optimizers. gamma's default range
/// is a full cost-Hamiltonian period; beta's default is the conventional
/// plotting window, which for the ring mixer is a knob rather than a period.
struct SearchDomain {
  double gamma_max = 2.0 * std::numbers::pi;
  double beta_max = std::numbers::pi / 2.0;

  void validate() const;
};

/// Immutable bundle of everything needed to evaluate schedules on one
/// instance: precomputed separator and spectrally decomposed mixer.
/// Mixers are cached per (n, k, kind) and shared.
struct QaoaSystem {
  ProblemInstance instance;
  PhaseSeparator separator;
  std::shared_ptr<const MixerOperator> mixer;

  const SubspaceIndex& index() const { return instance.index(); }
};

/// Shared, thread-safe mixer cache keyed by (n, k, kind).
std::shared_ptr<const MixerOperator> get_mixer(MixerKind kind,
                                               const SubspaceIndex& index);

QaoaSystem make_system(ProblemInstance instance, MixerKind mixer_kind);

/// Alternating evolution: per round, phase separator for gamma_i then mixer
/// for beta_i. Rounds with exactly zero angles are exact identities.
StateVector evolve(const QaoaSystem& system, const StateVector& initial,
                   const AngleSchedule& schedule);

/// <H_P> in the given state: sum of f(x) |amplitude_x|^2.
double expectation(const QaoaSystem& system, const StateVector& state);

/// F_p for a schedule from the given initial state.
double evaluate_fp(const QaoaSystem& system, const StateVector& initial,
                   const AngleSchedule& schedule);

/// expectation / (exact weight-k optimum). Throws if the optimum is zero.
double approximation_ratio(const ProblemInstance& instance,
                           double expectation_value);

/// |amplitude_i|^2 per basis state.
Eigen::VectorXd measurement_distribution(const StateVector& state);

struct MeasurementSample {
  Bitstring bitstring;
  int value;  // objective of the measured subset
};

/// i.i.d. computational-basis measurements; every outcome has weight k.
std::vector<MeasurementSample> sample_measurements(const QaoaSystem& system,
                                                   const StateVector& state,
                                                   int n_samples,
                                                   std::uint64_t seed);

struct EvolutionResult {
  StateVector final_state;
  double expectation = 0.0;
  double approx_ratio = 0.0;
  Eigen::VectorXd measurement_distribution;
};

EvolutionResult run_evolution(const QaoaSystem& system,
                              const StateVector& initial,
                              const AngleSchedule& schedule);

}  // namespace maxkvc
