#include "maxkvc/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "maxkvc/parallel.hpp"
#include "maxkvc/rng.hpp"
#include "json.hpp"

namespace maxkvc {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

double wrap_angle(double value, double range) {
  double r = std::fmod(value, range);
  if (r < 0.0) r += range;
  if (r >= range) r = 0.0;
  return r;
}

double clamp_angle(double value, double range) {
  return std::clamp(value, 0.0, std::nextafter(range, 0.0));
}

std::vector<double> draw_uniform_raw(Rng& rng, int p,
                                     const SearchDomain& domain) {
  std::vector<double> raw(2 * static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) raw[i] = rng.uniform(domain.gamma_max);
  for (int i = 0; i < p; ++i)
    raw[static_cast<std::size_t>(p) + i] = rng.uniform(domain.beta_max);
  return raw;
}

RunRecord record_from(const FpEvaluator& evaluator, std::string strategy,
                      std::uint64_t seed, int p, double wall_ms) {
  RunRecord rec;
  rec.strategy = std::move(strategy);
  rec.seed = seed;
  rec.p = p;
  rec.evaluations = evaluator.count();
  rec.sample_mean = evaluator.sample_mean();
  rec.sample_std = evaluator.sample_std();
  rec.sample_max = evaluator.sample_max();
  rec.wall_time_ms = wall_ms;
  if (evaluator.has_best()) {
    rec.best_schedule = evaluator.best_schedule();
    rec.best_value = evaluator.best_value();
    const auto& instance = evaluator.system().instance;
    if (instance.max_value() > 0)
      rec.approx_ratio = approximation_ratio(instance, rec.best_value);
  }
  return rec;
}

struct LocalBest {
  std::vector<double> raw;
  double value;
};

/// Nelder-Mead ascent tracking its own best; returns nothing if the budget
/// denied every evaluation.
std::optional<LocalBest> nelder_mead_core(FpEvaluator& evaluator,
                                          std::vector<double> start,
                                          std::int64_t allowance,
                                          const NelderMeadOptions& options) {
  const int d = static_cast<int>(start.size());
  std::int64_t used = 0;
  std::optional<LocalBest> best;
  auto eval = [&](const std::vector<double>& x, double& value) {
    if (used >= allowance) return false;
    if (!evaluator.try_eval(x, value)) return false;
    ++used;
    if (!best || value > best->value) best = LocalBest{x, value};
    return true;
  };

  std::vector<std::vector<double>> pts;
  std::vector<double> vals;
  double v;
  if (!eval(start, v)) return best;
  pts.push_back(start);
  vals.push_back(v);
  for (int i = 0; i < d; ++i) {
    auto pt = start;
    pt[static_cast<std::size_t>(i)] += options.initial_edge;
    if (!eval(pt, v)) return best;
    pts.push_back(std::move(pt));
    vals.push_back(v);
  }

  // Adaptive coefficients (scale with dimension).
  const double refl = 1.0;
  const double expn = 1.0 + 2.0 / d;
  const double ctrn = 0.75 - 0.5 / d;
  const double shrk = 1.0 - 1.0 / d;

  std::vector<std::size_t> order(pts.size());
  const auto combine = [&](const std::vector<double>& c,
                           const std::vector<double>& w, double t) {
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] + t * (c[i] - w[i]);
    return out;
  };

  for (;;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    const std::size_t ibest = order.front();
    const std::size_t iworst = order.back();
    const std::size_t isecond = order[order.size() - 2];

    double diameter = 0.0;
    for (const auto& pt : pts) {
      double dist2 = 0.0;
      for (std::size_t i = 0; i < pt.size(); ++i) {
        const double diff = pt[i] - pts[ibest][i];
        dist2 += diff * diff;
      }
      diameter = std::max(diameter, std::sqrt(dist2));
    }
    if (diameter < options.diameter_tol ||
        vals[ibest] - vals[iworst] < options.spread_tol)
      break;

    std::vector<double> centroid(static_cast<std::size_t>(d), 0.0);
    for (const auto idx : order)
      if (idx != iworst)
        for (std::size_t i = 0; i < centroid.size(); ++i)
          centroid[i] += pts[idx][i] / d;

    const auto reflected = combine(centroid, pts[iworst], refl);
    double f_reflected;
    if (!eval(reflected, f_reflected)) return best;

    if (f_reflected > vals[ibest]) {
      const auto expanded = combine(centroid, pts[iworst], expn);
      double f_expanded;
      if (!eval(expanded, f_expanded)) return best;
      if (f_expanded > f_reflected) {
        pts[iworst] = expanded;
        vals[iworst] = f_expanded;
      } else {
        pts[iworst] = reflected;
        vals[iworst] = f_reflected;
      }
      continue;
    }
    if (f_reflected > vals[isecond]) {
      pts[iworst] = reflected;
      vals[iworst] = f_reflected;
      continue;
    }

    // Contraction, outside or inside of the worst vertex.
    const bool outside = f_reflected > vals[iworst];
    const auto contracted =
        combine(centroid, pts[iworst], outside ? ctrn : -ctrn);
    double f_contracted;
    if (!eval(contracted, f_contracted)) return best;
    if (f_contracted > (outside ? f_reflected : vals[iworst])) {
      pts[iworst] = contracted;
      vals[iworst] = f_contracted;
      continue;
    }

    // Shrink toward the best vertex.
    for (const auto idx : order) {
      if (idx == ibest) continue;
      for (std::size_t i = 0; i < pts[idx].size(); ++i)
        pts[idx][i] = pts[ibest][i] + shrk * (pts[idx][i] - pts[ibest][i]);
      if (!eval(pts[idx], vals[idx])) return best;
    }
  }
  return best;
}

/// Refine + (hops-1) perturb/refine cycles with Metropolis acceptance.
std::optional<LocalBest> hop_search(FpEvaluator& evaluator, Rng& rng,
                                    std::vector<double> start_raw, int hops,
                                    std::int64_t allowance,
                                    const BasinHoppingOptions& options) {
  if (hops < 1) throw std::invalid_argument("basin_hopping: hops must be >= 1");
  const std::int64_t entry = evaluator.count();
  const auto spent = [&] { return evaluator.count() - entry; };
  const auto share = [&](int hops_left) {
    const std::int64_t left =
        std::min<std::int64_t>(allowance - spent(), evaluator.remaining());
    return std::max<std::int64_t>(1, left / hops_left);
  };

  const double temperature =
      options.temperature_scale *
      evaluator.system().instance.graph().n_edges();

  std::optional<LocalBest> best;
  auto current = nelder_mead_core(evaluator, std::move(start_raw), share(hops),
                                  options.nm);
  if (!current) return best;
  best = current;
  for (int hop = 1; hop < hops; ++hop) {
    if (allowance - spent() <= 0 || evaluator.remaining() <= 0) break;
    auto cand = current->raw;
    for (auto& coord : cand)
      coord += rng.uniform(-options.step, options.step);
    const auto refined =
        nelder_mead_core(evaluator, std::move(cand), share(hops - hop),
                         options.nm);
    if (!refined) break;
    if (refined->value > best->value) best = refined;
    const double delta = refined->value - current->value;
    const bool accept =
        delta >= 0.0 ||
        (temperature > 0.0 && rng.uniform01() < std::exp(delta / temperature));
    if (accept) current = refined;
  }
  return best;
}

}  // namespace

void Budget::validate() const {
  if (max_evaluations < 1)
    throw std::invalid_argument("Budget: max_evaluations must be >= 1");
}

AngleSchedule map_into_domain(const std::vector<double>& raw,
                              const SearchDomain& domain, MixerKind kind) {
  if (raw.empty() || raw.size() % 2 != 0)
    throw std::invalid_argument("map_into_domain: need 2p coordinates");
  const std::size_t p = raw.size() / 2;
  AngleSchedule schedule;
  schedule.gammas.resize(p);
  schedule.betas.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    schedule.gammas[i] = wrap_angle(raw[i], domain.gamma_max);
    schedule.betas[i] = kind == MixerKind::CompleteGraph
                            ? wrap_angle(raw[p + i], domain.beta_max)
                            : clamp_angle(raw[p + i], domain.beta_max);
  }
  return schedule;
}

std::vector<double> to_raw(const AngleSchedule& schedule) {
  std::vector<double> raw;
  raw.reserve(2 * schedule.gammas.size());
  raw.insert(raw.end(), schedule.gammas.begin(), schedule.gammas.end());
  raw.insert(raw.end(), schedule.betas.begin(), schedule.betas.end());
  return raw;
}

AngleSchedule interpolate_schedule(const AngleSchedule& schedule) {
  schedule.validate();
  const int p = schedule.p();
  AngleSchedule out;
  out.gammas.resize(static_cast<std::size_t>(p) + 1);
  out.betas.resize(static_cast<std::size_t>(p) + 1);
  if (p == 1) {
    out.gammas.assign(2, schedule.gammas[0]);
    out.betas.assign(2, schedule.betas[0]);
    return out;
  }
  const auto resample = [p](const std::vector<double>& values, double t) {
    // values[i] sits at normalized index i/(p-1).
    const double pos = t * (p - 1);
    const int lo = std::min(static_cast<int>(pos), p - 2);
    const double frac = pos - lo;
    return values[static_cast<std::size_t>(lo)] * (1.0 - frac) +
           values[static_cast<std::size_t>(lo) + 1] * frac;
  };
  for (int j = 0; j <= p; ++j) {
    const double t = static_cast<double>(j) / p;
    out.gammas[static_cast<std::size_t>(j)] = resample(schedule.gammas, t);
    out.betas[static_cast<std::size_t>(j)] = resample(schedule.betas, t);
  }
  return out;
}

AngleSchedule zero_pad(const AngleSchedule& schedule) {
  AngleSchedule out = schedule;
  out.gammas.push_back(0.0);
  out.betas.push_back(0.0);
  return out;
}

FpEvaluator::FpEvaluator(const QaoaSystem& system, const StateVector& initial,
                         int p, const SearchDomain& domain,
                         std::int64_t max_evaluations)
    : system_(system),
      initial_(initial),
      p_(p),
      domain_(domain),
      max_evaluations_(max_evaluations) {
  if (p < 1) throw std::invalid_argument("FpEvaluator: p must be >= 1");
  domain_.validate();
}

bool FpEvaluator::try_eval(const std::vector<double>& raw, double& value) {
  if (count_ >= max_evaluations_) return false;
  if (raw.size() != 2 * static_cast<std::size_t>(p_))
    throw std::invalid_argument("FpEvaluator: wrong coordinate count");
  AngleSchedule schedule = map_into_domain(raw, domain_, system_.mixer->kind);
  value = evaluate_fp(system_, initial_, schedule);
  ++count_;
  const double delta = value - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (value - mean_);
  if (!best_ || value > best_->value)
    best_ = Best{std::move(schedule), value};
  return true;
}

double FpEvaluator::sample_std() const {
  if (count_ < 2) return 0.0;
  return std::sqrt(m2_ / static_cast<double>(count_ - 1));
}

void nelder_mead_refine(FpEvaluator& evaluator, std::vector<double> start,
                        std::int64_t allowance,
                        const NelderMeadOptions& options) {
  nelder_mead_core(evaluator, std::move(start), allowance, options);
}

std::string RunRecord::to_json(bool include_timing) const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["strategy"] = strategy;
  j["instance_id"] = instance_id;
  j["seed"] = seed;
  j["p"] = p;
  j["gammas"] = best_schedule.gammas;
  j["betas"] = best_schedule.betas;
  j["best_value"] = best_value;
  j["approx_ratio"] = approx_ratio;
  j["evaluations"] = evaluations;
  j["sample_mean"] = sample_mean;
  j["sample_std"] = sample_std;
  j["sample_max"] = sample_max;
  if (include_timing) j["wall_time_ms"] = wall_time_ms;
  return j.dump();
}

RunRecord monte_carlo_search(const QaoaSystem& system,
                             const StateVector& initial, int p,
                             const SearchDomain& domain, const Budget& budget,
                             std::uint64_t seed) {
  budget.validate();
  domain.validate();
  const auto start = Clock::now();
  Rng rng(seed);
  FpEvaluator evaluator(system, initial, p, domain, budget.max_evaluations);
  double value;
  while (evaluator.try_eval(draw_uniform_raw(rng, p, domain), value)) {
  }
  return record_from(evaluator, strategy_name(Strategy::MonteCarlo), seed, p,
                     elapsed_ms(start));
}

std::pair<AngleSchedule, double> local_refine(const QaoaSystem& system,
                                              const StateVector& initial,
                                              const AngleSchedule& start,
                                              const SearchDomain& domain,
                                              const Budget& budget,
                                              const NelderMeadOptions& options) {
  budget.validate();
  start.validate();
  FpEvaluator evaluator(system, initial, start.p(), domain,
                        budget.max_evaluations);
  nelder_mead_refine(evaluator, to_raw(start), budget.max_evaluations,
                     options);
  if (!evaluator.has_best())
    throw std::runtime_error("local_refine: no evaluation performed");
  return {evaluator.best_schedule(), evaluator.best_value()};
}

RunRecord basin_hopping(const QaoaSystem& system, const StateVector& initial,
                        int p, const SearchDomain& domain,
                        const Budget& budget, int hops, std::uint64_t seed,
                        const std::optional<AngleSchedule>& start,
                        const BasinHoppingOptions& options) {
  budget.validate();
  domain.validate();
  const auto t0 = Clock::now();
  Rng rng(seed);
  FpEvaluator evaluator(system, initial, p, domain, budget.max_evaluations);
  std::vector<double> start_raw =
      start ? to_raw(*start) : draw_uniform_raw(rng, p, domain);
  hop_search(evaluator, rng, std::move(start_raw), hops,
             budget.max_evaluations, options);
  return record_from(evaluator, "basin-hopping", seed, p, elapsed_ms(t0));
}

RunRecord interpolation_warm_start(const RunRecord& prev,
                                   const QaoaSystem& system,
                                   const StateVector& initial,
                                   const SearchDomain& domain,
                                   const Budget& budget) {
  if (prev.best_schedule.p() < 1)
    throw std::invalid_argument(
        "interpolation_warm_start: previous record has no schedule");
  const auto t0 = Clock::now();
  const AngleSchedule warm = interpolate_schedule(prev.best_schedule);
  FpEvaluator evaluator(system, initial, warm.p(), domain,
                        budget.max_evaluations);
  nelder_mead_refine(evaluator, to_raw(warm), budget.max_evaluations, {});
  RunRecord rec = record_from(evaluator, "interpolation", prev.seed, warm.p(),
                              elapsed_ms(t0));
  rec.instance_id = prev.instance_id;
  return rec;
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::MonteCarlo:
      return "monte-carlo";
    case Strategy::BasinHopping:
      return "basin-hopping";
    case Strategy::Interpolation:
      return "interpolation";
  }
  return "unknown";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "monte-carlo") return Strategy::MonteCarlo;
  if (name == "basin-hopping") return Strategy::BasinHopping;
  if (name == "interpolation") return Strategy::Interpolation;
  throw std::invalid_argument("unknown strategy: " + name);
}

std::vector<RunRecord> strategy_ladder(const QaoaSystem& system,
                                       const StateVector& initial,
                                       Strategy strategy, int p_max,
                                       const SearchDomain& domain,
                                       std::int64_t per_level_budget, int hops,
                                       std::uint64_t seed) {
  if (p_max < 1) throw std::invalid_argument("strategy_ladder: p_max < 1");
  const Budget budget{per_level_budget, true};
  std::vector<RunRecord> records;
  records.reserve(static_cast<std::size_t>(p_max));
  for (int p = 1; p <= p_max; ++p) {
    const std::uint64_t level_seed =
        derive_seed(seed, {static_cast<std::uint64_t>(p)});
    switch (strategy) {
      case Strategy::MonteCarlo:
        records.push_back(monte_carlo_search(system, initial, p, domain,
                                             budget, level_seed));
        break;
      case Strategy::BasinHopping:
        records.push_back(basin_hopping(system, initial, p, domain, budget,
                                        hops, level_seed));
        break;
      case Strategy::Interpolation:
        if (p == 1) {
          records.push_back(basin_hopping(system, initial, 1, domain, budget,
                                          hops, level_seed));
          records.back().strategy = strategy_name(Strategy::Interpolation);
        } else {
          records.push_back(interpolation_warm_start(records.back(), system,
                                                     initial, domain, budget));
        }
        break;
    }
  }
  return records;
}

std::vector<RunRecord> warmstart_ladder(
    const QaoaSystem& system, const StateVector& initial,
    const LadderOptions& options, std::uint64_t seed,
    const std::vector<std::vector<AngleSchedule>>* extra_starts) {
  if (options.p_max < 1)
    throw std::invalid_argument("warmstart_ladder: p_max < 1");
  options.domain.validate();
  std::vector<RunRecord> records;
  const BasinHoppingOptions hop_options{};
  for (int p = 1; p <= options.p_max; ++p) {
    const auto t0 = Clock::now();
    const std::uint64_t level_seed =
        derive_seed(seed, {static_cast<std::uint64_t>(p), 0x1addULL});
    Rng rng(level_seed);
    FpEvaluator evaluator(system, initial, p, options.domain,
                          options.per_level_budget);

    std::vector<std::vector<double>> starts;
    if (p > 1 && records.back().p == p - 1) {
      starts.push_back(to_raw(zero_pad(records.back().best_schedule)));
      starts.push_back(to_raw(interpolate_schedule(records.back().best_schedule)));
    }
    if (extra_starts && static_cast<std::size_t>(p - 1) < extra_starts->size())
      for (const auto& schedule : (*extra_starts)[static_cast<std::size_t>(p - 1)])
        if (schedule.p() == p) starts.push_back(to_raw(schedule));
    for (int r = 0; r < std::max(1, options.restarts); ++r)
      starts.push_back(draw_uniform_raw(rng, p, options.domain));

    for (std::size_t s = 0; s < starts.size(); ++s) {
      if (evaluator.remaining() <= 0) break;
      const auto share = std::max<std::int64_t>(
          1, evaluator.remaining() /
                 static_cast<std::int64_t>(starts.size() - s));
      hop_search(evaluator, rng, std::move(starts[s]), options.hops, share,
                 hop_options);
    }
    records.push_back(record_from(evaluator, "reference", level_seed, p,
                                  elapsed_ms(t0)));
  }
  return records;
}

StrategyComparison strategy_compare(const std::vector<QaoaSystem>& systems,
                                    const std::vector<Strategy>& strategies,
                                    const SearchDomain& domain,
                                    std::int64_t per_level_budget, int p_max,
                                    std::uint64_t seed, int hops,
                                    int reference_multiplier,
                                    int reference_restarts, unsigned threads) {
  if (per_level_budget < 1)
    throw std::invalid_argument("strategy_compare: budget < 1");
  StrategyComparison cmp;
  for (int p = 1; p <= p_max; ++p) cmp.levels.push_back(p);

  struct PerInstance {
    bool skipped = false;
    // ratios[s][p-1]; s indexes strategies, last row is the reference
    std::vector<std::vector<double>> ratios;
  };
  std::vector<PerInstance> results(systems.size());

  parallel_for(systems.size(), threads, [&](std::size_t idx) {
    const QaoaSystem& system = systems[idx];
    PerInstance& out = results[idx];
    if (system.instance.max_value() == 0) {
      out.skipped = true;
      return;
    }
    const StateVector initial = dicke_state(system.index());
    std::vector<std::vector<AngleSchedule>> bests(
        static_cast<std::size_t>(p_max));
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      const auto ladder = strategy_ladder(
          system, initial, strategies[s], p_max, domain,
          per_level_budget, hops,
          derive_seed(seed, {idx, s}));
      std::vector<double> ratios;
      for (const auto& rec : ladder) {
        ratios.push_back(rec.approx_ratio);
        bests[static_cast<std::size_t>(rec.p - 1)].push_back(
            rec.best_schedule);
      }
      out.ratios.push_back(std::move(ratios));
    }
    LadderOptions ref;
    ref.p_max = p_max;
    ref.domain = domain;
    ref.per_level_budget = per_level_budget * reference_multiplier;
    ref.hops = hops;
    ref.restarts = reference_restarts;
    const auto ladder = warmstart_ladder(system, initial, ref,
                                         derive_seed(seed, {idx, 0xfefULL}),
                                         &bests);
    std::vector<double> ratios;
    for (const auto& rec : ladder) ratios.push_back(rec.approx_ratio);
    out.ratios.push_back(std::move(ratios));
  });

  const std::size_t n_rows = strategies.size() + 1;
  for (const auto& res : results)
    if (!res.skipped) ++cmp.n_instances;
  if (cmp.n_instances == 0)
    throw std::runtime_error("strategy_compare: all instances degenerate");
  for (std::size_t s = 0; s < n_rows; ++s) {
    StrategyCurve curve;
    curve.name = s < strategies.size() ? strategy_name(strategies[s])
                                       : "reference";
    for (int p = 0; p < p_max; ++p) {
      double mean = 0.0;
      for (const auto& res : results)
        if (!res.skipped)
          mean += res.ratios[s][static_cast<std::size_t>(p)];
      mean /= cmp.n_instances;
      double var = 0.0;
      for (const auto& res : results)
        if (!res.skipped) {
          const double d = res.ratios[s][static_cast<std::size_t>(p)] - mean;
          var += d * d;
        }
      const double sd =
          cmp.n_instances > 1 ? std::sqrt(var / (cmp.n_instances - 1)) : 0.0;
      curve.mean_ratio.push_back(mean);
      curve.ci_halfwidth.push_back(1.96 * sd / std::sqrt(cmp.n_instances));
    }
    cmp.curves.push_back(std::move(curve));
  }
  return cmp;
}

}  // namespace maxkvc
