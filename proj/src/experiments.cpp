#include "maxkvc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "maxkvc/parallel.hpp"
#include "maxkvc/rng.hpp"
#include "maxkvc/version.hpp"
#include "json.hpp"

namespace maxkvc {

namespace {

using nlohmann::json;

// Stream tags keeping the independent RNG families apart.
constexpr std::uint64_t kFamilyTag = 0x66;
constexpr std::uint64_t kRunTag = 0x72;
constexpr std::uint64_t kInitialTag = 0x69;
constexpr std::uint64_t kBeatTag = 0x62;

std::uint64_t mixer_code(MixerKind kind) {
  return static_cast<std::uint64_t>(kind) + 1;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s2 = 0.0;
  for (const double x : v) s2 += (x - m) * (x - m);
  return std::sqrt(s2 / static_cast<double>(v.size() - 1));
}

double ci_halfwidth_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  return 1.96 * sample_std_of(v) / std::sqrt(static_cast<double>(v.size()));
}

StateVector make_initial(const SubspaceIndex& index, const std::string& kind,
                         std::uint64_t seed) {
  if (kind == "dicke") return dicke_state(index);
  return random_k_state(index, seed);
}

AngleSchedule draw_schedule(Rng& rng, int p, const SearchDomain& domain) {
  AngleSchedule s;
  s.gammas.reserve(static_cast<std::size_t>(p));
  s.betas.reserve(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) s.gammas.push_back(rng.uniform(domain.gamma_max));
  for (int i = 0; i < p; ++i) s.betas.push_back(rng.uniform(domain.beta_max));
  return s;
}

std::string degenerate_log(int graph_id) {
  return "skipped graph " + std::to_string(graph_id) +
         ": max objective is 0 (no edges reachable), ratio undefined";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 2 || n > 16)
    throw std::invalid_argument("config: n must be in [2, 16]");
  if (!(p_edge >= 0.0 && p_edge <= 1.0))
    throw std::invalid_argument("config: p_edge must be in [0, 1]");
  if (n_graphs < 1) throw std::invalid_argument("config: count must be >= 1");
  const int kk = resolved_k();
  if (kk < 1 || kk > n)
    throw std::invalid_argument("config: k must be in [1, n]");
  if (mixers.empty()) throw std::invalid_argument("config: no mixers");
  if (initial != "dicke" && initial != "random-basis")
    throw std::invalid_argument("config: initial must be dicke or random-basis");
  if (p_max < 1) throw std::invalid_argument("config: p_max must be >= 1");
  if (p_levels.empty())
    throw std::invalid_argument("config: p_levels must be non-empty");
  for (const int p : p_levels)
    if (p < 1) throw std::invalid_argument("config: p_levels entries must be >= 1");
  domain.validate();
  if (budget < 1) throw std::invalid_argument("config: budget must be >= 1");
  if (hops < 1) throw std::invalid_argument("config: hops must be >= 1");
  if (restarts < 0) throw std::invalid_argument("config: restarts must be >= 0");
  if (grid_resolution < 2)
    throw std::invalid_argument("config: grid resolution must be >= 2");
  if (samples < 1) throw std::invalid_argument("config: samples must be >= 1");
  if (repetitions < 1)
    throw std::invalid_argument("config: repetitions must be >= 1");
  if (beat_repetitions < 1)
    throw std::invalid_argument("config: beat_repetitions must be >= 1");
  if (beat_cap < 1) throw std::invalid_argument("config: beat_cap must be >= 1");
  if (strategies.empty())
    throw std::invalid_argument("config: strategies must be non-empty");
  if (reference_multiplier < 1)
    throw std::invalid_argument("config: reference_multiplier must be >= 1");
  if (reference_restarts < 0)
    throw std::invalid_argument("config: reference_restarts must be >= 0");
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["experiment"] = experiment;
  j["n"] = n;
  j["p_edge"] = p_edge;
  j["n_graphs"] = n_graphs;
  j["k"] = resolved_k();
  json mixer_names = json::array();
  for (const auto m : mixers) mixer_names.push_back(mixer_name(m));
  j["mixers"] = mixer_names;
  j["initial"] = initial;
  j["p_max"] = p_max;
  j["p_levels"] = p_levels;
  j["gamma_max"] = domain.gamma_max;
  j["beta_max"] = domain.beta_max;
  j["budget"] = budget;
  j["hops"] = hops;
  j["restarts"] = restarts;
  j["grid_resolution"] = grid_resolution;
  j["per_graph_grids"] = per_graph_grids;
  j["samples"] = samples;
  j["repetitions"] = repetitions;
  j["beat_repetitions"] = beat_repetitions;
  j["beat_cap"] = beat_cap;
  json strategy_names = json::array();
  for (const auto s : strategies) strategy_names.push_back(strategy_name(s));
  j["strategies"] = strategy_names;
  j["reference_multiplier"] = reference_multiplier;
  j["reference_restarts"] = reference_restarts;
  return j.dump();
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "gen") {
    c.n = 7;
    c.n_graphs = 10;
  } else if (experiment == "initial-compare") {
    c.n = 7;
    c.n_graphs = 20;
    c.mixers = {MixerKind::CompleteGraph, MixerKind::Ring};
    c.p_max = 5;
    c.budget = 200;
    c.hops = 3;
  } else if (experiment == "mixer-compare") {
    c.n = 7;
    c.n_graphs = 100;
    c.mixers = {MixerKind::CompleteGraph, MixerKind::Ring};
    c.p_max = 5;
    c.budget = 400;
    c.hops = 4;
  } else if (experiment == "heatmap") {
    c.n = 10;
    c.n_graphs = 100;
    c.mixers = {MixerKind::CompleteGraph, MixerKind::Ring};
    c.p_max = 1;
    c.grid_resolution = 64;
  } else if (experiment == "std-decay") {
    c.n = 10;
    c.n_graphs = 1;
    c.mixers = {MixerKind::CompleteGraph};
    c.p_max = 5;
    c.samples = 1000;
    c.repetitions = 100;
    c.beat_repetitions = 20;
    c.beat_cap = 1'000'000;
  } else if (experiment == "angle-patterns") {
    c.n = 10;
    c.n_graphs = 50;
    c.mixers = {MixerKind::CompleteGraph};
    c.p_levels = {5, 6};
    c.p_max = 6;
    c.budget = 1000;
    c.hops = 4;
    c.restarts = 2;
  } else if (experiment == "strategy-compare") {
    c.n = 10;
    c.n_graphs = 50;
    c.mixers = {MixerKind::CompleteGraph};
    c.p_max = 5;
    c.budget = 300;
    c.hops = 4;
  } else {
    throw std::invalid_argument("unknown experiment: " + experiment);
  }
  return c;
}

ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& experiment) {
  ExperimentConfig c = default_config(experiment);
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: expected an object");
  if (j.contains("mixer") && j.contains("mixers"))
    throw std::invalid_argument("config: give either mixer or mixers");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "experiment") {
        if (value.get<std::string>() != experiment)
          throw std::invalid_argument("config: experiment field is '" +
                                      value.get<std::string>() +
                                      "' but the subcommand is '" +
                                      experiment + "'");
      } else if (key == "n") {
        c.n = value.get<int>();
      } else if (key == "p_edge") {
        c.p_edge = value.get<double>();
      } else if (key == "n_graphs") {
        c.n_graphs = value.get<int>();
      } else if (key == "k") {
        c.k = value.get<int>();
      } else if (key == "mixer") {
        c.mixers = {mixer_from_name(value.get<std::string>())};
      } else if (key == "mixers") {
        c.mixers.clear();
        for (const auto& name : value)
          c.mixers.push_back(mixer_from_name(name.get<std::string>()));
      } else if (key == "initial") {
        c.initial = value.get<std::string>();
      } else if (key == "p_max") {
        c.p_max = value.get<int>();
      } else if (key == "p_levels") {
        c.p_levels = value.get<std::vector<int>>();
      } else if (key == "gamma_max") {
        c.domain.gamma_max = value.get<double>();
      } else if (key == "beta_max") {
        c.domain.beta_max = value.get<double>();
      } else if (key == "budget") {
        c.budget = value.get<std::int64_t>();
      } else if (key == "hops") {
        c.hops = value.get<int>();
      } else if (key == "restarts") {
        c.restarts = value.get<int>();
      } else if (key == "grid_resolution") {
        c.grid_resolution = value.get<int>();
      } else if (key == "per_graph_grids") {
        c.per_graph_grids = value.get<bool>();
      } else if (key == "samples") {
        c.samples = value.get<int>();
      } else if (key == "repetitions") {
        c.repetitions = value.get<int>();
      } else if (key == "beat_repetitions") {
        c.beat_repetitions = value.get<int>();
      } else if (key == "beat_cap") {
        c.beat_cap = value.get<std::int64_t>();
      } else if (key == "strategies") {
        c.strategies.clear();
        for (const auto& name : value)
          c.strategies.push_back(strategy_from_name(name.get<std::string>()));
      } else if (key == "reference_multiplier") {
        c.reference_multiplier = value.get<int>();
      } else if (key == "reference_restarts") {
        c.reference_restarts = value.get<int>();
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: bad value type: ") +
                                e.what());
  }
  c.validate();
  return c;
}

Provenance ExperimentContext::provenance() const {
  Provenance prov;
  prov.config_hash = fnv1a64(config.canonical_json());
  prov.master_seed = master_seed;
  prov.code_version = kVersion;
  return prov;
}

std::vector<Graph> make_family(const ExperimentConfig& config,
                               std::uint64_t master_seed) {
  std::vector<Graph> graphs;
  graphs.reserve(static_cast<std::size_t>(config.n_graphs));
  for (int i = 0; i < config.n_graphs; ++i)
    graphs.push_back(gen_random_graph(
        config.n, config.p_edge,
        derive_seed(master_seed, {kFamilyTag, static_cast<std::uint64_t>(i)})));
  return graphs;
}

GenResult exp_gen(const ExperimentContext& ctx) {
  const auto& config = ctx.config;
  config.validate();
  GenResult result;
  result.graphs = make_family(config, ctx.master_seed);

  const Provenance prov = ctx.provenance();
  json j;
  char hash_hex[24];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(prov.config_hash));
  j["provenance"] = {{"config_hash", hash_hex},
                     {"master_seed", prov.master_seed},
                     {"code_version", prov.code_version}};
  j["config"] = json::parse(config.canonical_json());
  json graph_entries = json::array();
  for (int i = 0; i < config.n_graphs; ++i) {
    const ProblemInstance instance(result.graphs[static_cast<std::size_t>(i)],
                                   config.resolved_k());
    result.max_values.push_back(instance.max_value());
    json entry;
    entry["id"] = i;
    entry["seed"] =
        derive_seed(ctx.master_seed, {kFamilyTag, static_cast<std::uint64_t>(i)});
    entry["k"] = config.resolved_k();
    entry["max_value"] = instance.max_value();
    entry["graph"] =
        json::parse(result.graphs[static_cast<std::size_t>(i)].to_json());
    graph_entries.push_back(std::move(entry));
  }
  j["graphs"] = std::move(graph_entries);

  result.path = ctx.out_dir / "instances.json";
  write_text_file(result.path, j.dump(2) + "\n");
  return result;
}

InitialCompareResult exp_initial_state_compare(const ExperimentContext& ctx) {
  const auto& config = ctx.config;
  config.validate();
  const auto graphs = make_family(config, ctx.master_seed);
  const int k = config.resolved_k();
  const Budget budget{config.budget, true};

  struct PerGraph {
    bool skipped = false;
    std::vector<InitialCompareRow> rows;
  };
  std::vector<PerGraph> partial(graphs.size());

  parallel_for(graphs.size(), ctx.threads, [&](std::size_t g) {
    const ProblemInstance instance(graphs[g], k);
    if (instance.max_value() == 0) {
      partial[g].skipped = true;
      return;
    }
    for (const MixerKind kind : config.mixers) {
      const QaoaSystem system = make_system(instance, kind);
      const SubspaceIndex& index = system.index();
      const StateVector dicke = dicke_state(index);
      for (int p = 1; p <= config.p_max; ++p) {
        const auto seed_for = [&](std::uint64_t start_id) {
          return derive_seed(ctx.master_seed,
                             {kRunTag, g, mixer_code(kind),
                              static_cast<std::uint64_t>(p), start_id});
        };
        const RunRecord dicke_rec =
            basin_hopping(system, dicke, p, config.domain, budget, config.hops,
                          seed_for(0));
        std::vector<double> classical;
        classical.reserve(static_cast<std::size_t>(index.dim()));
        for (std::uint64_t r = 0; r < index.dim(); ++r) {
          const StateVector basis = basis_k_state(index, index.unrank(r));
          const RunRecord rec = basin_hopping(system, basis, p, config.domain,
                                              budget, config.hops,
                                              seed_for(r + 1));
          classical.push_back(rec.approx_ratio);
        }
        partial[g].rows.push_back(InitialCompareRow{
            static_cast<int>(g), kind, p, dicke_rec.approx_ratio,
            mean_of(classical), sample_std_of(classical)});
      }
    }
  });

  InitialCompareResult result;
  for (std::size_t g = 0; g < partial.size(); ++g) {
    if (partial[g].skipped) {
      ++result.n_skipped;
      result.logs.push_back(degenerate_log(static_cast<int>(g)));
      continue;
    }
    result.by_graph.insert(result.by_graph.end(), partial[g].rows.begin(),
                           partial[g].rows.end());
  }
  if (result.by_graph.empty())
    throw std::runtime_error("initial-compare: all instances degenerate");

  for (const MixerKind kind : config.mixers)
    for (int p = 1; p <= config.p_max; ++p) {
      std::vector<double> dicke_vals, mean_vals, std_vals;
      for (const auto& row : result.by_graph)
        if (row.mixer == kind && row.p == p) {
          dicke_vals.push_back(row.dicke_ratio);
          mean_vals.push_back(row.classical_mean_ratio);
          std_vals.push_back(row.classical_std);
        }
      result.aggregate.push_back(InitialCompareRow{
          -1, kind, p, mean_of(dicke_vals), mean_of(mean_vals),
          mean_of(std_vals)});
    }

  const Provenance prov = ctx.provenance();
  CsvWriter csv(prov);
  csv.comment("aggregate over " +
              std::to_string(static_cast<int>(graphs.size()) - result.n_skipped) +
              " graphs (" + std::to_string(result.n_skipped) + " skipped)");
  for (const auto& log : result.logs) csv.comment(log);
  csv.header({"p", "mixer", "dicke_ratio", "classical_mean_ratio",
              "classical_std"});
  for (const auto& row : result.aggregate)
    csv.row(row.p, mixer_name(row.mixer), row.dicke_ratio,
            row.classical_mean_ratio, row.classical_std);
  write_text_file(ctx.out_dir / "initial_compare.csv", csv.str());

  CsvWriter detail(prov);
  detail.header({"graph_id", "p", "mixer", "dicke_ratio",
                 "classical_mean_ratio", "classical_std"});
  for (const auto& row : result.by_graph)
    detail.row(row.graph_id, row.p, mixer_name(row.mixer), row.dicke_ratio,
               row.classical_mean_ratio, row.classical_std);
  write_text_file(ctx.out_dir / "initial_compare_by_graph.csv", detail.str());
  return result;
}

MixerCompareResult exp_mixer_compare(const ExperimentContext& ctx) {
  const auto& config = ctx.config;
  config.validate();
  if (config.mixers.size() != 2)
    throw std::invalid_argument("mixer-compare: exactly two mixers required");
  const auto graphs = make_family(config, ctx.master_seed);
  const int k = config.resolved_k();

  struct PerGraph {
    bool skipped = false;
    std::string log;
    std::vector<double> ratios;  // [p-1]
  };
  std::vector<PerGraph> partial(graphs.size());

  parallel_for(graphs.size(), ctx.threads, [&](std::size_t g) {
    const ProblemInstance instance(graphs[g], k);
    if (instance.max_value() == 0) {
      partial[g].skipped = true;
      partial[g].log = degenerate_log(static_cast<int>(g));
      return;
    }
    LadderOptions ladder_options;
    ladder_options.p_max = config.p_max;
    ladder_options.domain = config.domain;
    ladder_options.per_level_budget = config.budget;
    ladder_options.hops = config.hops;
    ladder_options.restarts = std::max(1, config.restarts);

    std::vector<std::vector<double>> side_ratios;
    for (const MixerKind kind : config.mixers) {
      const QaoaSystem system = make_system(instance, kind);
      const StateVector initial = make_initial(
          system.index(), config.initial,
          derive_seed(ctx.master_seed, {kInitialTag, g}));
      const auto ladder = warmstart_ladder(
          system, initial, ladder_options,
          derive_seed(ctx.master_seed, {kRunTag, g, mixer_code(kind)}));
      std::vector<double> ratios;
      for (const auto& rec : ladder) ratios.push_back(rec.approx_ratio);
      side_ratios.push_back(std::move(ratios));
    }
    for (int p = 0; p < config.p_max; ++p) {
      const double denom = side_ratios[1][static_cast<std::size_t>(p)];
      if (denom <= 0.0) {
        partial[g].skipped = true;
        partial[g].log = "skipped graph " + std::to_string(g) +
                         ": zero best ratio for " +
                         mixer_name(config.mixers[1]);
        partial[g].ratios.clear();
        return;
      }
      partial[g].ratios.push_back(
          side_ratios[0][static_cast<std::size_t>(p)] / denom);
    }
  });

  MixerCompareResult result;
  for (std::size_t g = 0; g < partial.size(); ++g) {
    if (partial[g].skipped) {
      ++result.n_skipped;
      result.logs.push_back(partial[g].log);
      continue;
    }
    result.graph_ids.push_back(static_cast<int>(g));
    result.per_graph.push_back(partial[g].ratios);
  }
  if (result.per_graph.empty())
    throw std::runtime_error("mixer-compare: all instances degenerate");

  for (int p = 1; p <= config.p_max; ++p) {
    std::vector<double> column;
    for (const auto& ratios : result.per_graph)
      column.push_back(ratios[static_cast<std::size_t>(p - 1)]);
    result.levels.push_back(MixerCompareLevel{
        p, mean_of(column), ci_halfwidth_of(column),
        static_cast<int>(column.size())});
  }

  const Provenance prov = ctx.provenance();
  CsvWriter csv(prov);
  csv.comment(std::string("ratio is best(") + mixer_name(config.mixers[0]) +
              ") / best(" + mixer_name(config.mixers[1]) +
              ") under equal per-level budgets");
  for (const auto& log : result.logs) csv.comment(log);
  csv.header({"p", "mean_ratio", "ci_halfwidth", "n_graphs"});
  for (const auto& level : result.levels)
    csv.row(level.p, level.mean_ratio, level.ci_halfwidth, level.n_graphs);
  write_text_file(ctx.out_dir / "mixer_compare.csv", csv.str());

  CsvWriter detail(prov);
  detail.header({"graph_id", "p", "ratio"});
  for (std::size_t i = 0; i < result.per_graph.size(); ++i)
    for (int p = 1; p <= config.p_max; ++p)
      detail.row(result.graph_ids[i], p,
                 result.per_graph[i][static_cast<std::size_t>(p - 1)]);
  write_text_file(ctx.out_dir / "mixer_compare_by_graph.csv", detail.str());
  return result;
}

HeatmapResult exp_heatmap(const ExperimentContext& ctx) {
  const auto& config = ctx.config;
  config.validate();
  if (config.p_max != 1)
    throw std::invalid_argument("heatmap: only p = 1 is supported");
  const auto graphs = make_family(config, ctx.master_seed);
  const int k = config.resolved_k();
  const int R = config.grid_resolution;

  HeatmapResult result;
  result.n_graphs = static_cast<int>(graphs.size());
  for (int i = 0; i < R; ++i) {
    result.gammas.push_back(config.domain.gamma_max * i / R);
    result.betas.push_back(config.domain.beta_max * i / R);
  }

  for (const MixerKind kind : config.mixers) {
    HeatmapGrid grid;
    grid.mixer = kind;
    grid.per_graph.assign(graphs.size(), Eigen::MatrixXd::Zero(R, R));

    // One work item per (graph, gamma row).
    std::vector<QaoaSystem> systems;
    std::vector<StateVector> initials;
    systems.reserve(graphs.size());
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      systems.push_back(make_system(ProblemInstance(graphs[g], k), kind));
      initials.push_back(make_initial(
          systems.back().index(), config.initial,
          derive_seed(ctx.master_seed, {kInitialTag, g})));
    }
    parallel_for(graphs.size() * static_cast<std::size_t>(R), ctx.threads,
                 [&](std::size_t item) {
                   const std::size_t g = item / static_cast<std::size_t>(R);
                   const int i = static_cast<int>(item % static_cast<std::size_t>(R));
                   AngleSchedule schedule;
                   schedule.gammas = {result.gammas[static_cast<std::size_t>(i)]};
                   schedule.betas = {0.0};
                   for (int b = 0; b < R; ++b) {
                     schedule.betas[0] = result.betas[static_cast<std::size_t>(b)];
                     grid.per_graph[g](i, b) =
                         evaluate_fp(systems[g], initials[g], schedule);
                   }
                 });

    grid.mean_grid = Eigen::MatrixXd::Zero(R, R);
    for (const auto& m : grid.per_graph) grid.mean_grid += m;
    grid.mean_grid /= static_cast<double>(graphs.size());
    result.grids.push_back(std::move(grid));
  }

  const Provenance prov = ctx.provenance();
  const auto write_grid = [&](const Eigen::MatrixXd& m,
                              const std::filesystem::path& path) {
    CsvWriter csv(prov);
    csv.header({"gamma", "beta", "value"});
    for (int i = 0; i < R; ++i)
      for (int b = 0; b < R; ++b)
        csv.row(result.gammas[static_cast<std::size_t>(i)],
                result.betas[static_cast<std::size_t>(b)], m(i, b));
    write_text_file(path, csv.str());
  };
  for (const auto& grid : result.grids) {
    const std::string stem = std::string("heatmap_") + mixer_name(grid.mixer);
    write_grid(grid.mean_grid, ctx.out_dir / (stem + "_mean.csv"));
    if (config.per_graph_grids) {
      for (std::size_t g = 0; g < grid.per_graph.size(); ++g) {
        char name[96];
        std::snprintf(name, sizeof(name), "%s_graph%03d.csv", stem.c_str(),
                      static_cast<int>(g));
        write_grid(grid.per_graph[g], ctx.out_dir / name);
      }
    }
  }
  return result;
}

StdDecayResult exp_std_decay(const ExperimentContext& ctx) {
  const auto& config = ctx.config;
  config.validate();
  const auto graphs = make_family(config, ctx.master_seed);
  const ProblemInstance instance(graphs[0], config.resolved_k());
  if (instance.max_value() == 0)
    throw std::runtime_error(
        "std-decay: the seeded graph has max objective 0; change the seed");
  const QaoaSystem system = make_system(instance, config.mixers[0]);
  const StateVector initial =
      make_initial(system.index(), config.initial,
                   derive_seed(ctx.master_seed, {kInitialTag, 0}));
  const double optimum = instance.max_value();
  const int reps = config.repetitions;
  const int beat_reps = std::min(config.beat_repetitions, reps);
  const int p_max = config.p_max;

  // bests[r][p-1], stds[r][p-1]; beat_counts[r][p-2] (levels 2..p_max).
  std::vector<std::vector<double>> bests(static_cast<std::size_t>(reps)),
      stds(static_cast<std::size_t>(reps));
  std::vector<std::vector<std::int64_t>> beat_counts(
      static_cast<std::size_t>(beat_reps));

  parallel_for(static_cast<std::size_t>(reps), ctx.threads, [&](std::size_t r) {
    auto& best_row = bests[r];
    auto& std_row = stds[r];
    for (int p = 1; p <= p_max; ++p) {
      Rng rng(derive_seed(ctx.master_seed,
                          {kRunTag, r, static_cast<std::uint64_t>(p)}));
      std::vector<double> values;
      values.reserve(static_cast<std::size_t>(config.samples));
      for (int s = 0; s < config.samples; ++s)
        values.push_back(evaluate_fp(
            system, initial, draw_schedule(rng, p, config.domain)));
      best_row.push_back(*std::max_element(values.begin(), values.end()));
      std_row.push_back(sample_std_of(values));
    }
    if (r < static_cast<std::size_t>(beat_reps)) {
      auto& beat_row = beat_counts[r];
      for (int p = 2; p <= p_max; ++p) {
        Rng rng(derive_seed(ctx.master_seed,
                            {kBeatTag, r, static_cast<std::uint64_t>(p)}));
        const double target = best_row[static_cast<std::size_t>(p - 2)];
        std::int64_t count = 0;
        while (count < config.beat_cap) {
          ++count;
          if (evaluate_fp(system, initial,
                          draw_schedule(rng, p, config.domain)) > target)
            break;
        }
        beat_row.push_back(count);
      }
    }
  });

  StdDecayResult result{graphs[0], {}};
  for (int p = 1; p <= p_max; ++p) {
    std::vector<double> best_col, std_col;
    for (int r = 0; r < reps; ++r) {
      best_col.push_back(bests[static_cast<std::size_t>(r)]
                              [static_cast<std::size_t>(p - 1)] /
                         optimum);
      std_col.push_back(
          stds[static_cast<std::size_t>(r)][static_cast<std::size_t>(p - 1)]);
    }
    StdDecayLevel level;
    level.p = p;
    level.best_ratio_mean = mean_of(best_col);
    level.best_ratio_ci = ci_halfwidth_of(best_col);
    level.sample_std_mean = mean_of(std_col);
    level.sample_std_ci = ci_halfwidth_of(std_col);
    level.beat_cap = config.beat_cap;
    level.beat_mean = 0.0;
    level.beat_ci = 0.0;
    level.n_capped = 0;
    if (p >= 2) {
      std::vector<double> beats;
      for (int r = 0; r < beat_reps; ++r) {
        const std::int64_t c = beat_counts[static_cast<std::size_t>(r)]
                                          [static_cast<std::size_t>(p - 2)];
        beats.push_back(static_cast<double>(c));
        if (c >= config.beat_cap) ++level.n_capped;
      }
      level.beat_mean = mean_of(beats);
      level.beat_ci = ci_halfwidth_of(beats);
    }
    result.levels.push_back(level);
  }

  const Provenance prov = ctx.provenance();
  CsvWriter csv(prov);
  csv.comment("graph: n=" + std::to_string(config.n) +
              " edges=" + std::to_string(graphs[0].n_edges()) +
              " max_value=" + std::to_string(instance.max_value()));
  csv.comment("beat_samples at row p counts level-p draws needed to beat the "
              "same repetition's level-(p-1) best");
  csv.header({"p", "best_ratio_mean", "best_ratio_ci", "sample_std_mean",
              "sample_std_ci", "beat_samples_mean", "beat_samples_ci",
              "beat_cap", "n_capped", "n_reps", "n_beat_reps"});
  for (const auto& level : result.levels)
    csv.row(level.p, level.best_ratio_mean, level.best_ratio_ci,
            level.sample_std_mean, level.sample_std_ci, level.beat_mean,
            level.beat_ci, level.beat_cap, level.n_capped, reps, beat_reps);
  write_text_file(ctx.out_dir / "std_decay.csv", csv.str());
  write_text_file(ctx.out_dir / "std_decay_graph.json",
                  graphs[0].to_json() + "\n");
  return result;
}

AnglePatternsResult exp_angle_patterns(const ExperimentContext& ctx) {
  const auto& config = ctx.config;
  config.validate();
  const auto graphs = make_family(config, ctx.master_seed);
  const int k = config.resolved_k();
  const int p_target = *std::max_element(config.p_levels.begin(),
                                         config.p_levels.end());

  struct PerGraph {
    bool skipped = false;
    std::vector<AnglePatternRow> rows;
  };
  std::vector<PerGraph> partial(graphs.size());

  parallel_for(graphs.size(), ctx.threads, [&](std::size_t g) {
    const ProblemInstance instance(graphs[g], k);
    if (instance.max_value() == 0) {
      partial[g].skipped = true;
      return;
    }
    const QaoaSystem system = make_system(instance, config.mixers[0]);
    const StateVector initial = make_initial(
        system.index(), config.initial,
        derive_seed(ctx.master_seed, {kInitialTag, g}));
    LadderOptions options;
    options.p_max = p_target;
    options.domain = config.domain;
    options.per_level_budget = config.budget;
    options.hops = config.hops;
    options.restarts = std::max(1, config.restarts);
    const auto ladder = warmstart_ladder(
        system, initial, options, derive_seed(ctx.master_seed, {kRunTag, g}));
    for (const int p : config.p_levels) {
      const auto& schedule = ladder[static_cast<std::size_t>(p - 1)].best_schedule;
      for (int round = 1; round <= p; ++round)
        partial[g].rows.push_back(AnglePatternRow{
            static_cast<int>(g), p, round,
            schedule.gammas[static_cast<std::size_t>(round - 1)],
            schedule.betas[static_cast<std::size_t>(round - 1)]});
    }
  });

  AnglePatternsResult result;
  for (std::size_t g = 0; g < partial.size(); ++g) {
    if (partial[g].skipped) {
      ++result.n_skipped;
      result.logs.push_back(degenerate_log(static_cast<int>(g)));
      continue;
    }
    result.rows.insert(result.rows.end(), partial[g].rows.begin(),
                       partial[g].rows.end());
  }
  if (result.rows.empty())
    throw std::runtime_error("angle-patterns: all instances degenerate");

  const Provenance prov = ctx.provenance();
  CsvWriter csv(prov);
  for (const auto& log : result.logs) csv.comment(log);
  csv.header({"graph_id", "p", "round", "gamma", "beta"});
  for (const auto& row : result.rows)
    csv.row(row.graph_id, row.p, row.round, row.gamma, row.beta);
  write_text_file(ctx.out_dir / "angle_patterns.csv", csv.str());
  return result;
}

StrategyCompareResult exp_strategy_compare(const ExperimentContext& ctx) {
  const auto& config = ctx.config;
  config.validate();
  const auto graphs = make_family(config, ctx.master_seed);
  const int k = config.resolved_k();

  StrategyCompareResult result;
  std::vector<QaoaSystem> systems;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    ProblemInstance instance(graphs[g], k);
    if (instance.max_value() == 0) {
      ++result.n_skipped;
      result.logs.push_back(degenerate_log(static_cast<int>(g)));
      continue;
    }
    systems.push_back(make_system(std::move(instance), config.mixers[0]));
  }
  if (systems.empty())
    throw std::runtime_error("strategy-compare: all instances degenerate");

  result.comparison = strategy_compare(
      systems, config.strategies, config.domain, config.budget, config.p_max,
      derive_seed(ctx.master_seed, {kRunTag}), config.hops,
      config.reference_multiplier, config.reference_restarts, ctx.threads);

  const Provenance prov = ctx.provenance();
  CsvWriter csv(prov);
  csv.comment("n_instances=" + std::to_string(result.comparison.n_instances) +
              " budget_per_level=" + std::to_string(config.budget) +
              " reference_multiplier=" +
              std::to_string(config.reference_multiplier));
  for (const auto& log : result.logs) csv.comment(log);
  csv.header({"p", "strategy", "mean_ratio", "ci_halfwidth"});
  for (const auto& curve : result.comparison.curves)
    for (std::size_t i = 0; i < curve.mean_ratio.size(); ++i)
      csv.row(result.comparison.levels[i], curve.name, curve.mean_ratio[i],
              curve.ci_halfwidth[i]);
  write_text_file(ctx.out_dir / "strategy_compare.csv", csv.str());
  return result;
}

}  // namespace maxkvc
