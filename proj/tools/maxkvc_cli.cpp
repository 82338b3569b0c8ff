#include <cstdio>
#include <exception>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "maxkvc/experiments.hpp"
#include "maxkvc/io.hpp"
#include "maxkvc/parallel.hpp"
#include "maxkvc/verify.hpp"
#include "maxkvc/version.hpp"

namespace {

using maxkvc::ExperimentContext;

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  unsigned threads = 0;  // 0 = hardware concurrency
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path,
                  "JSON config file; defaults apply when omitted")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", args.seed, "master seed (default 1)");
  sub->add_option("--out-dir", args.out_dir,
                  "output directory (default ./out)");
  sub->add_option("--threads", args.threads,
                  "worker threads; 0 means hardware concurrency");
}

ExperimentContext make_context(const std::string& experiment,
                               const CommonArgs& args) {
  ExperimentContext ctx;
  ctx.config = args.config_path.empty()
                   ? maxkvc::default_config(experiment)
                   : maxkvc::parse_config(
                         maxkvc::read_text_file(args.config_path), experiment);
  ctx.master_seed = args.seed;
  ctx.out_dir = args.out_dir;
  ctx.threads = args.threads == 0 ? maxkvc::default_threads() : args.threads;
  return ctx;
}

void print_summary(const ExperimentContext& ctx, nlohmann::json extra) {
  const maxkvc::Provenance prov = ctx.provenance();
  char hash_hex[24];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(prov.config_hash));
  nlohmann::json summary;
  summary["experiment"] = ctx.config.experiment;
  summary["config_hash"] = hash_hex;
  summary["master_seed"] = prov.master_seed;
  summary["code_version"] = prov.code_version;
  summary["out_dir"] = ctx.out_dir.string();
  summary.update(extra);
  std::cout << summary.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact weight-k subspace simulator and experiment harness for the "
      "alternating-ansatz QAOA on max-k vertex cover"};
  app.set_version_flag("--version", std::string(maxkvc::kVersion));
  app.require_subcommand(1);

  int exit_code = 0;
  const auto experiments = {
      "gen",           "initial-compare",  "mixer-compare", "heatmap",
      "std-decay",     "angle-patterns",   "strategy-compare"};
  const auto descriptions = {
      "generate and describe a seeded instance family",
      "Dicke start versus all classical weight-k starts",
      "best-found ratio of one mixer over another, averaged over graphs",
      "F_1 on a uniform angle grid, per graph and averaged",
      "Monte Carlo best/std statistics per level on one seeded graph",
      "best reference-protocol angles per round for scatter plots",
      "equal-budget angle-selection strategy comparison"};

  std::vector<std::unique_ptr<CommonArgs>> arg_blocks;
  auto desc_it = descriptions.begin();
  for (const char* name : experiments) {
    CLI::App* sub = app.add_subcommand(name, *desc_it++);
    arg_blocks.push_back(std::make_unique<CommonArgs>());
    CommonArgs& args = *arg_blocks.back();
    add_common(sub, args);
    const std::string experiment = name;
    sub->callback([&args, experiment] {
      const ExperimentContext ctx = make_context(experiment, args);
      nlohmann::json extra;
      if (experiment == "gen") {
        const auto result = maxkvc::exp_gen(ctx);
        extra["n_graphs"] = static_cast<int>(result.graphs.size());
        extra["files"] = {result.path.filename().string()};
      } else if (experiment == "initial-compare") {
        const auto result = maxkvc::exp_initial_state_compare(ctx);
        extra["n_skipped"] = result.n_skipped;
        extra["rows"] = static_cast<int>(result.by_graph.size());
        extra["files"] = {"initial_compare.csv",
                          "initial_compare_by_graph.csv"};
      } else if (experiment == "mixer-compare") {
        const auto result = maxkvc::exp_mixer_compare(ctx);
        extra["n_skipped"] = result.n_skipped;
        extra["n_graphs_kept"] = static_cast<int>(result.graph_ids.size());
        extra["files"] = {"mixer_compare.csv", "mixer_compare_by_graph.csv"};
      } else if (experiment == "heatmap") {
        const auto result = maxkvc::exp_heatmap(ctx);
        extra["n_graphs"] = result.n_graphs;
        extra["resolution"] = static_cast<int>(result.gammas.size());
        nlohmann::json files = nlohmann::json::array();
        for (const auto& grid : result.grids)
          files.push_back(std::string("heatmap_") +
                          maxkvc::mixer_name(grid.mixer) + "_mean.csv");
        extra["files"] = files;
      } else if (experiment == "std-decay") {
        const auto result = maxkvc::exp_std_decay(ctx);
        extra["levels"] = static_cast<int>(result.levels.size());
        extra["files"] = {"std_decay.csv", "std_decay_graph.json"};
      } else if (experiment == "angle-patterns") {
        const auto result = maxkvc::exp_angle_patterns(ctx);
        extra["n_skipped"] = result.n_skipped;
        extra["rows"] = static_cast<int>(result.rows.size());
        extra["files"] = {"angle_patterns.csv"};
      } else if (experiment == "strategy-compare") {
        const auto result = maxkvc::exp_strategy_compare(ctx);
        extra["n_skipped"] = result.n_skipped;
        extra["n_instances"] = result.comparison.n_instances;
        extra["files"] = {"strategy_compare.csv"};
      }
      print_summary(ctx, extra);
    });
  }

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the invariant suite");
  arg_blocks.push_back(std::make_unique<CommonArgs>());
  CommonArgs& verify_args = *arg_blocks.back();
  add_common(verify_cmd, verify_args);
  verify_cmd->callback([&verify_args, &exit_code] {
    const unsigned threads = verify_args.threads == 0
                                 ? maxkvc::default_threads()
                                 : verify_args.threads;
    const maxkvc::VerifyReport report =
        maxkvc::run_verify_suite(verify_args.seed, threads);
    nlohmann::json failed = nlohmann::json::array();
    for (const auto& check : report.checks) {
      std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name
                << ": " << check.detail << "\n";
      if (!check.passed) failed.push_back(check.name);
    }
    std::cout.flush();
    if (!report.all_passed()) {
      nlohmann::json err;
      err["error"] = "verification failed";
      err["failed_checks"] = failed;
      std::cerr << err.dump() << std::endl;
      exit_code = 2;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    nlohmann::json err;
    err["error"] = e.what();
    err["kind"] = "usage";
    std::cerr << err.dump() << std::endl;
    return e.get_exit_code();
  } catch (const std::invalid_argument& e) {
    nlohmann::json err;
    err["error"] = e.what();
    err["kind"] = "config";
    std::cerr << err.dump() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    err["kind"] = "runtime";
    std::cerr << err.dump() << std::endl;
    return 1;
  }
  return exit_code;
}
