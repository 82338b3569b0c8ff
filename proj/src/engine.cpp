#include "maxkvc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "maxkvc/rng.hpp"

namespace maxkvc {

void AngleSchedule::validate() const {
  if (gammas.size() != betas.size())
    throw std::invalid_argument("AngleSchedule: gamma/beta length mismatch");
  if (gammas.empty())
    throw std::invalid_argument("AngleSchedule: p must be >= 1");
  for (double g : gammas)
    if (!std::isfinite(g))
      throw std::invalid_argument("AngleSchedule: non-finite gamma");
  for (double b : betas)
    if (!std::isfinite(b))
      throw std::invalid_argument("AngleSchedule: non-finite beta");
}

void SearchDomain::validate() const {
  if (!(gamma_max > 0.0) || !(beta_max > 0.0))
    throw std::invalid_argument("SearchDomain: ranges must be positive");
}

std::shared_ptr<const MixerOperator> get_mixer(MixerKind kind,
                                               const SubspaceIndex& index) {
  using Key = std::tuple<int, int, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const MixerOperator>> cache;
  const Key key{index.n(), index.k(), static_cast<int>(kind)};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto mixer = std::make_shared<const MixerOperator>(
        build_mixer(kind, index, SpectrumPolicy::Auto));
    it = cache.emplace(key, std::move(mixer)).first;
  }
  return it->second;
}

QaoaSystem make_system(ProblemInstance instance, MixerKind mixer_kind) {
  const SubspaceIndex index = instance.index();
  PhaseSeparator separator = build_phase_separator(instance, index);
  auto mixer = get_mixer(mixer_kind, index);
  return QaoaSystem{std::move(instance), std::move(separator),
                    std::move(mixer)};
}

StateVector evolve(const QaoaSystem& system, const StateVector& initial,
                   const AngleSchedule& schedule) {
  schedule.validate();
  if (!(initial.index == system.index()))
    throw std::invalid_argument("evolve: state dimension mismatch");
  StateVector state = initial;
  for (int round = 0; round < schedule.p(); ++round) {
    state = phase_apply(system.separator, schedule.gammas[round], state);
    state = propagator_apply(*system.mixer, schedule.betas[round], state);
  }
  return state;
}

double expectation(const QaoaSystem& system, const StateVector& state) {
  return system.separator.diagonal.dot(state.amplitudes.cwiseAbs2());
}

double evaluate_fp(const QaoaSystem& system, const StateVector& initial,
                   const AngleSchedule& schedule) {
  return expectation(system, evolve(system, initial, schedule));
}

double approximation_ratio(const ProblemInstance& instance,
                           double expectation_value) {
  if (instance.max_value() == 0)
    throw std::domain_error(
        "approximation_ratio: optimum is zero (edgeless graph)");
  return expectation_value / instance.max_value();
}

Eigen::VectorXd measurement_distribution(const StateVector& state) {
  return state.amplitudes.cwiseAbs2();
}

std::vector<MeasurementSample> sample_measurements(const QaoaSystem& system,
                                                   const StateVector& state,
                                                   int n_samples,
                                                   std::uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("sample_measurements: n_samples must be >= 1");
  const Eigen::VectorXd probs = measurement_distribution(state);
  std::vector<double> cumulative(probs.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    cumulative[static_cast<std::size_t>(i)] = (acc += probs[i]);

  Rng rng(seed);
  const auto& table = system.instance.objective_table();
  std::vector<MeasurementSample> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    const double u = rng.uniform01() * acc;
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto i = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                 probs.size() - 1));
    samples.push_back({system.index().unrank(i), table[i]});
  }
  return samples;
}

EvolutionResult run_evolution(const QaoaSystem& system,
                              const StateVector& initial,
                              const AngleSchedule& schedule) {
  EvolutionResult result{evolve(system, initial, schedule), 0.0, 0.0, {}};
  result.expectation = expectation(system, result.final_state);
  result.approx_ratio =
      approximation_ratio(system.instance, result.expectation);
  result.measurement_distribution =
      measurement_distribution(result.final_state);
  return result;
}

}  // namespace maxkvc
