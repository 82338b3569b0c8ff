#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "maxkvc/engine.hpp"
#include "maxkvc/io.hpp"
#include "maxkvc/optimize.hpp"

namespace maxkvc {

/// All experiment knobs, JSON-configurable. Unset fields take
/// experiment-specific defaults (see default_config).
struct ExperimentConfig {
  std::string experiment;

  // Instance family.
  int n = 7;
  double p_edge = 0.5;
  int n_graphs = 20;
  std::optional<int> k;  // defaults to floor(n / 2)

  // Evolution and search.
  std::vector<MixerKind> mixers{MixerKind::CompleteGraph};
  std::string initial = "dicke";  // "dicke" or "random-basis"
  int p_max = 5;
  std::vector<int> p_levels{5, 6};  // angle-patterns levels
  SearchDomain domain{};
  std::int64_t budget = 500;  // F_p evaluations per search
  int hops = 4;
  int restarts = 1;

  // Heatmap.
  int grid_resolution = 64;
  bool per_graph_grids = true;

  // Sampling statistics.
  int samples = 1000;
  int repetitions = 100;
  int beat_repetitions = 20;
  std::int64_t beat_cap = 1'000'000;

  // Strategy comparison.
  std::vector<Strategy> strategies{Strategy::MonteCarlo,
                                   Strategy::BasinHopping,
                                   Strategy::Interpolation};
  int reference_multiplier = 20;
  int reference_restarts = 10;

  int resolved_k() const { return k.value_or(n / 2); }
  void validate() const;

  /// Fully resolved, key-sorted JSON of every knob; hashed for provenance.
  std::string canonical_json() const;
};

/// Defaults per experiment kind (graph sizes and budgets follow the studied
/// parameter ranges: 7-10 vertices, edge probability 0.5, k = floor(n/2)).
ExperimentConfig default_config(const std::string& experiment);

/// Parses JSON text over the experiment's defaults. Unknown keys and
/// invalid values raise std::invalid_argument.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& experiment);

struct ExperimentContext {
  ExperimentConfig config;
  std::uint64_t master_seed = 1;
  std::filesystem::path out_dir;
  unsigned threads = 1;

  Provenance provenance() const;
};

/// The seeded instance family for a config: graph i uses a seed derived
/// from (master_seed, i).
std::vector<Graph> make_family(const ExperimentConfig& config,
                               std::uint64_t master_seed);

/// Writes instances.json describing the family (edges, seeds, optima).
struct GenResult {
  std::vector<Graph> graphs;
  std::vector<int> max_values;
  std::filesystem::path path;
};
GenResult exp_gen(const ExperimentContext& ctx);

/// Dicke start versus the exact average over all weight-k basis starts,
/// each optimized independently per level and mixer.
struct InitialCompareRow {
  int graph_id;  // -1 for the aggregate over graphs
  MixerKind mixer;
  int p;
  double dicke_ratio;
  double classical_mean_ratio;
  double classical_std;
};
struct InitialCompareResult {
  std::vector<InitialCompareRow> by_graph;
  std::vector<InitialCompareRow> aggregate;
  int n_skipped = 0;
  std::vector<std::string> logs;
};
InitialCompareResult exp_initial_state_compare(const ExperimentContext& ctx);

/// Mean ratio of best-found approximation ratios mixers[0] / mixers[1]
/// under equal budgets, with a normal-approximation 95% interval.
struct MixerCompareLevel {
  int p;
  double mean_ratio;
  double ci_halfwidth;
  int n_graphs;
};
struct MixerCompareResult {
  std::vector<MixerCompareLevel> levels;
  std::vector<int> graph_ids;                  // instances kept
  std::vector<std::vector<double>> per_graph;  // [kept index][p-1]
  int n_skipped = 0;
  std::vector<std::string> logs;
};
MixerCompareResult exp_mixer_compare(const ExperimentContext& ctx);

/// F_1 on a uniform grid over the search domain, per graph and averaged.
struct HeatmapGrid {
  MixerKind mixer;
  Eigen::MatrixXd mean_grid;                 // (gamma index, beta index)
  std::vector<Eigen::MatrixXd> per_graph;
};
struct HeatmapResult {
  std::vector<double> gammas;
  std::vector<double> betas;
  std::vector<HeatmapGrid> grids;  // one per configured mixer
  int n_graphs = 0;
};
HeatmapResult exp_heatmap(const ExperimentContext& ctx);

/// Monte Carlo statistics per level on one seeded graph: best-found ratio
/// and sample std over repetitions, plus the mean number of fresh level-p
/// draws needed to beat the same repetition's level-(p-1) best (capped).
struct StdDecayLevel {
  int p;
  double best_ratio_mean;
  double best_ratio_ci;
  double sample_std_mean;
  double sample_std_ci;
  double beat_mean;      // 0 for p = 1
  double beat_ci;
  std::int64_t beat_cap;
  int n_capped;
};
struct StdDecayResult {
  Graph graph;
  std::vector<StdDecayLevel> levels;
};
StdDecayResult exp_std_decay(const ExperimentContext& ctx);

/// Best reference-protocol schedules per graph, flattened to one row per
/// round for scatter plotting.
struct AnglePatternRow {
  int graph_id;
  int p;
  int round;  // 1-based
  double gamma;
  double beta;
};
struct AnglePatternsResult {
  std::vector<AnglePatternRow> rows;
  int n_skipped = 0;
  std::vector<std::string> logs;
};
AnglePatternsResult exp_angle_patterns(const ExperimentContext& ctx);

/// Equal-budget strategy comparison with a larger-budget reference curve.
struct StrategyCompareResult {
  StrategyComparison comparison;
  int n_skipped = 0;
  std::vector<std::string> logs;
};
StrategyCompareResult exp_strategy_compare(const ExperimentContext& ctx);

}  // namespace maxkvc
