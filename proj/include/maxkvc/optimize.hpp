#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxkvc/engine.hpp"

namespace maxkvc {

/// Cap on the number of F_p evaluations a search may spend.
struct Budget {
  std::int64_t max_evaluations = 1;
  bool per_level = true;  // interpreted by the experiment harness

  void validate() const;
};

/// Maps raw optimizer coordinates into the search domain. gamma wraps
/// modulo its range (a true period); beta wraps for the complete mixer and
/// clamps for the ring mixer, which has no period to wrap over.
AngleSchedule map_into_domain(const std::vector<double>& raw,
                              const SearchDomain& domain, MixerKind kind);

std::vector<double> to_raw(const AngleSchedule& schedule);

/// Linear resampling of a p-round schedule onto p+1 rounds (angles treated
/// as functions of normalized round index). p=1 duplicates the angles.
AngleSchedule interpolate_schedule(const AngleSchedule& schedule);

/// Appends a (0, 0) round; leaves the evolved state unchanged.
AngleSchedule zero_pad(const AngleSchedule& schedule);

/// Counts every F_p evaluation, enforces the budget, and keeps the running
/// best and sample statistics. All search strategies evaluate through this,
/// so reported bests and counts are consistent by construction.
class FpEvaluator {
 public:
  FpEvaluator(const QaoaSystem& system, const StateVector& initial, int p,
              const SearchDomain& domain, std::int64_t max_evaluations);

  /// Evaluates at the domain-mapped point. Returns false (without
  /// evaluating) once the budget is spent.
  bool try_eval(const std::vector<double>& raw, double& value);

  std::int64_t count() const { return count_; }
  std::int64_t remaining() const { return max_evaluations_ - count_; }
  bool has_best() const { return best_.has_value(); }
  const AngleSchedule& best_schedule() const { return best_->schedule; }
  double best_value() const { return best_->value; }
  double sample_mean() const { return count_ > 0 ? mean_ : 0.0; }
  double sample_std() const;
  double sample_max() const { return best_ ? best_->value : 0.0; }

  const QaoaSystem& system() const { return system_; }
  const SearchDomain& domain() const { return domain_; }
  int p() const { return p_; }

 private:
  struct Best {
    AngleSchedule schedule;
    double value;
  };

  const QaoaSystem& system_;
  const StateVector& initial_;
  int p_;
  SearchDomain domain_;
  std::int64_t max_evaluations_;
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  std::optional<Best> best_;
};

struct NelderMeadOptions {
  double initial_edge = 0.1;    // radians
  double diameter_tol = 1e-6;   // simplex diameter convergence
  double spread_tol = 1e-9;     // value spread convergence
};

/// Derivative-free simplex ascent on F_p from `start` (raw coordinates),
/// spending at most `allowance` evaluations from the evaluator's budget.
/// Never returns a value below F_p(start) unless the budget denies even the
/// initial evaluation.
void nelder_mead_refine(FpEvaluator& evaluator, std::vector<double> start,
                        std::int64_t allowance,
                        const NelderMeadOptions& options = {});

/// Serializable record of one search run.
struct RunRecord {
  std::string strategy;
  std::string instance_id;
  std::uint64_t seed = 0;
  int p = 0;
  AngleSchedule best_schedule;
  double best_value = 0.0;
  double approx_ratio = 0.0;
  std::int64_t evaluations = 0;
  double sample_mean = 0.0;
  double sample_std = 0.0;
  double sample_max = 0.0;
  double wall_time_ms = 0.0;

  /// JSON object, schema_version 1. Timing is omitted by default so that
  /// result files are byte-stable across runs.
  std::string to_json(bool include_timing = false) const;
};

/// Uniform i.i.d. schedules over the domain; returns the best of `budget`
/// draws plus mean/std/max of the evaluated values.
RunRecord monte_carlo_search(const QaoaSystem& system,
                             const StateVector& initial, int p,
                             const SearchDomain& domain, const Budget& budget,
                             std::uint64_t seed);

/// Nelder-Mead ascent from a given schedule; returns (schedule, value) with
/// value >= F_p(start) when the budget permits the start evaluation.
std::pair<AngleSchedule, double> local_refine(
    const QaoaSystem& system, const StateVector& initial,
    const AngleSchedule& start, const SearchDomain& domain,
    const Budget& budget, const NelderMeadOptions& options = {});

struct BasinHoppingOptions {
  double step = 0.3;                   // uniform perturbation half-width
  double temperature_scale = 0.1;      // T = scale * |E|
  NelderMeadOptions nm{};
};

/// Repeated perturb + refine with Metropolis acceptance; returns the best
/// schedule ever evaluated. `start` seeds the first refinement when given,
/// otherwise a uniform random schedule is drawn.
RunRecord basin_hopping(const QaoaSystem& system, const StateVector& initial,
                        int p, const SearchDomain& domain,
                        const Budget& budget, int hops, std::uint64_t seed,
                        const std::optional<AngleSchedule>& start = {},
                        const BasinHoppingOptions& options = {});

/// Warm-starts level p+1 by linear resampling of a level-p result, then
/// refines within the budget.
RunRecord interpolation_warm_start(const RunRecord& prev,
                                   const QaoaSystem& system,
                                   const StateVector& initial,
                                   const SearchDomain& domain,
                                   const Budget& budget);

enum class Strategy { MonteCarlo, BasinHopping, Interpolation };

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

/// Runs one strategy across levels 1..p_max with a fixed per-level budget;
/// element i of the result is the level-(i+1) record.
std::vector<RunRecord> strategy_ladder(const QaoaSystem& system,
                                       const StateVector& initial,
                                       Strategy strategy, int p_max,
                                       const SearchDomain& domain,
                                       std::int64_t per_level_budget, int hops,
                                       std::uint64_t seed);

struct LadderOptions {
  int p_max = 1;
  SearchDomain domain{};
  std::int64_t per_level_budget = 1;
  int hops = 8;
  int restarts = 1;  // random basin-hopping starts per level
};

/// Best-effort M_p estimation ladder: every level seeds from the previous
/// best (zero-padded and interpolated), optional external candidates, and
/// random restarts. The zero-padded candidate makes the curve non-decreasing
/// in p. `extra_starts[level-1]`, when provided, is folded into the start
/// pool, so the result dominates any search whose bests are passed in.
std::vector<RunRecord> warmstart_ladder(
    const QaoaSystem& system, const StateVector& initial,
    const LadderOptions& options, std::uint64_t seed,
    const std::vector<std::vector<AngleSchedule>>* extra_starts = nullptr);

struct StrategyCurve {
  std::string name;
  std::vector<double> mean_ratio;     // indexed by level-1
  std::vector<double> ci_halfwidth;   // 1.96 * std / sqrt(n_instances)
};

struct StrategyComparison {
  std::vector<int> levels;
  std::vector<StrategyCurve> curves;  // one per strategy, plus "reference"
  int n_instances = 0;
};

/// Equal-budget comparison of angle-selection strategies over an instance
/// set, with a larger-budget reference curve that additionally folds in
/// every strategy's best schedules.
StrategyComparison strategy_compare(const std::vector<QaoaSystem>& systems,
                                    const std::vector<Strategy>& strategies,
                                    const SearchDomain& domain,
                                    std::int64_t per_level_budget, int p_max,
                                    std::uint64_t seed, int hops = 8,
                                    int reference_multiplier = 20,
                                    int reference_restarts = 10,
                                    unsigned threads = 1);

}  // namespace maxkvc
