#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxkvc/experiments.hpp"
#include "maxkvc/io.hpp"

#include "json.hpp"

using namespace maxkvc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir =
      fs::temp_directory_path() / ("maxkvc_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentContext make_ctx(ExperimentConfig config, std::uint64_t seed,
                           const std::string& tag, unsigned threads = 2) {
  return ExperimentContext{std::move(config), seed, temp_dir(tag), threads};
}

// Reads every regular file in a directory into (name, bytes) pairs.
std::vector<std::pair<std::string, std::string>> dir_contents(
    const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file())
      out.emplace_back(entry.path().filename().string(),
                       read_text_file(entry.path()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("io-helpers") {
  TEST_CASE("fnv1a64 reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  }

  TEST_CASE("doubles format identically and round-trip 12 digits") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-0.25) == "-0.25");
    CHECK(format_double(1e-09) == "1e-09");
    CHECK(format_double(3.141592653589793) == "3.14159265359");
  }

  TEST_CASE("csv documents start with the provenance comment") {
    const Provenance prov{0xdeadbeefULL, 42, "0.0-test"};
    CHECK(prov.header_comment() ==
          "# config_hash=00000000deadbeef, master_seed=42, "
          "code_version=0.0-test");
    CsvWriter csv(prov);
    csv.comment("note");
    csv.header({"a", "b"});
    csv.row(1, 2.5);
    csv.row("x", std::int64_t{-7});
    CHECK(csv.str() ==
          "# config_hash=00000000deadbeef, master_seed=42, "
          "code_version=0.0-test\n# note\na,b\n1,2.5\nx,-7\n");
  }

  TEST_CASE("text files round-trip") {
    const fs::path dir = temp_dir("io");
    const fs::path path = dir / "nested" / "file.txt";
    write_text_file(path, "alpha\nbeta\n");
    CHECK(read_text_file(path) == "alpha\nbeta\n");
    CHECK_THROWS_AS(read_text_file(dir / "missing.txt"), std::runtime_error);
  }

  TEST_CASE("spectrum csv lists one line per distinct eigenvalue") {
    const auto spectrum = johnson_spectrum(4, 2);
    const std::string text = spectrum_csv(spectrum, Provenance{1, 2, "v"});
    CHECK(text.find("eigenvalue,multiplicity") != std::string::npos);
    CHECK(text.find("4,1") != std::string::npos);
    CHECK(text.find("0,3") != std::string::npos);
    CHECK(text.find("-2,2") != std::string::npos);
  }

  TEST_CASE("sparse coordinate dump matches the matrix") {
    // Column-major nonzero order.
    const auto mixer = build_ring_mixer(SubspaceIndex(2, 1));
    CHECK(sparse_coord_dump(mixer.matrix) == "1 0 2\n0 1 2\n");
  }
}

TEST_SUITE("experiment-config") {
  TEST_CASE("defaults exist for every experiment and validate") {
    for (const std::string name :
         {"gen", "initial-compare", "mixer-compare", "heatmap", "std-decay",
          "angle-patterns", "strategy-compare"}) {
      const ExperimentConfig config = default_config(name);
      CHECK(config.experiment == name);
      CHECK_NOTHROW(config.validate());
    }
    CHECK_THROWS_AS(default_config("unknown"), std::invalid_argument);
  }

  TEST_CASE("parsing overlays defaults and rejects junk") {
    const auto config =
        parse_config(R"({"n": 6, "budget": 50, "mixer": "ring"})",
                     "mixer-compare");
    CHECK(config.n == 6);
    CHECK(config.budget == 50);
    REQUIRE(config.mixers.size() == 1);
    CHECK(config.mixers[0] == MixerKind::Ring);

    CHECK_THROWS_AS(parse_config(R"({"bogus": 1})", "gen"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_config(R"({"mixer": "ring", "mixers": ["ring"]})", "gen"),
        std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"experiment": "heatmap"})", "gen"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"n": 0})", "gen"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"p_edge": 1.5})", "gen"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{", "gen"), std::invalid_argument);
  }

  TEST_CASE("the canonical form pins the config hash") {
    const ExperimentConfig a = default_config("heatmap");
    ExperimentConfig b = a;
    CHECK(a.canonical_json() == b.canonical_json());
    b.grid_resolution = 32;
    CHECK(a.canonical_json() != b.canonical_json());
    CHECK(fnv1a64(a.canonical_json()) != fnv1a64(b.canonical_json()));
    // Key order in the source text does not matter.
    const auto c = parse_config(R"({"budget": 50, "n": 6})", "gen");
    const auto d = parse_config(R"({"n": 6, "budget": 50})", "gen");
    CHECK(c.canonical_json() == d.canonical_json());
  }

  TEST_CASE("k defaults to floor(n/2)") {
    ExperimentConfig config = default_config("gen");
    config.n = 9;
    CHECK(config.resolved_k() == 4);
    config.k = 3;
    CHECK(config.resolved_k() == 3);
  }
}

TEST_SUITE("experiment-runs") {
  TEST_CASE("gen writes a parseable instance family") {
    ExperimentConfig config = default_config("gen");
    config.n = 6;
    config.n_graphs = 4;
    const auto ctx = make_ctx(config, 11, "gen");
    const GenResult result = exp_gen(ctx);
    REQUIRE(result.graphs.size() == 4);
    const auto j = nlohmann::json::parse(read_text_file(result.path));
    CHECK(j.at("provenance").at("config_hash").get<std::string>().size() == 16);
    CHECK(j.at("provenance").at("master_seed").get<std::uint64_t>() == 11);
    REQUIRE(j.at("graphs").size() == 4);
    for (const auto& inst : j.at("graphs")) {
      CHECK(inst.at("k").get<int>() == 3);
      CHECK(inst.at("graph").at("n").get<int>() == 6);
      CHECK(inst.at("max_value").get<int>() >= 0);
    }
    // Same context, same bytes.
    const auto ctx2 = make_ctx(config, 11, "gen2");
    exp_gen(ctx2);
    CHECK(read_text_file(ctx2.out_dir / "instances.json") ==
          read_text_file(ctx.out_dir / "instances.json"));
  }

  TEST_CASE("initial-state comparison covers every graph, mixer and level") {
    ExperimentConfig config = default_config("initial-compare");
    config.n = 5;
    config.n_graphs = 3;
    config.p_max = 2;
    config.budget = 25;
    config.hops = 2;
    const auto ctx = make_ctx(config, 7, "initial");
    const auto result = exp_initial_state_compare(ctx);
    const int kept = 3 - result.n_skipped;
    CHECK(result.by_graph.size() ==
          static_cast<std::size_t>(kept * 2 * config.p_max));
    CHECK(result.aggregate.size() == static_cast<std::size_t>(2 * config.p_max));
    for (const auto& row : result.by_graph) {
      CHECK(row.dicke_ratio > 0.0);
      CHECK(row.dicke_ratio <= 1.0 + 1e-12);
      CHECK(row.classical_mean_ratio > 0.0);
      CHECK(row.classical_mean_ratio <= 1.0 + 1e-12);
      CHECK(row.classical_std >= 0.0);
    }
    for (const auto& row : result.aggregate) CHECK(row.graph_id == -1);
    const std::string csv = read_text_file(ctx.out_dir / "initial_compare.csv");
    CHECK(csv.rfind("# config_hash=", 0) == 0);
    CHECK(csv.find("p,mixer,dicke_ratio,classical_mean_ratio,classical_std") !=
          std::string::npos);
    CHECK(fs::exists(ctx.out_dir / "initial_compare_by_graph.csv"));
  }

  TEST_CASE("a mixer compared against itself scores exactly one") {
    ExperimentConfig config = default_config("mixer-compare");
    config.n = 5;
    config.n_graphs = 3;
    config.p_max = 2;
    config.budget = 30;
    config.hops = 2;
    config.mixers = {MixerKind::CompleteGraph, MixerKind::CompleteGraph};
    const auto ctx = make_ctx(config, 5, "mixer_self");
    const auto result = exp_mixer_compare(ctx);
    REQUIRE(result.levels.size() == 2);
    for (const auto& level : result.levels) {
      CHECK(level.mean_ratio == 1.0);
      CHECK(level.ci_halfwidth == 0.0);
    }
    for (const auto& per_graph : result.per_graph)
      for (double r : per_graph) CHECK(r == 1.0);
  }

  TEST_CASE("mixer comparison reports every level over kept graphs") {
    ExperimentConfig config = default_config("mixer-compare");
    config.n = 6;
    config.n_graphs = 4;
    config.p_max = 2;
    config.budget = 40;
    config.hops = 2;
    config.mixers = {MixerKind::CompleteGraph, MixerKind::Ring};
    const auto ctx = make_ctx(config, 9, "mixer_cr");
    const auto result = exp_mixer_compare(ctx);
    REQUIRE(result.levels.size() == 2);
    const int kept = static_cast<int>(result.graph_ids.size());
    CHECK(kept + result.n_skipped == 4);
    for (const auto& level : result.levels) {
      CHECK(level.n_graphs == kept);
      CHECK(level.mean_ratio > 0.0);
      CHECK(level.ci_halfwidth >= 0.0);
    }
    CHECK(result.per_graph.size() == static_cast<std::size_t>(kept));
    const std::string csv = read_text_file(ctx.out_dir / "mixer_compare.csv");
    CHECK(csv.find("p,mean_ratio,ci_halfwidth,n_graphs") != std::string::npos);
    CHECK(fs::exists(ctx.out_dir / "mixer_compare_by_graph.csv"));
  }

  TEST_CASE("heatmap grids carry the expected flat rows and columns") {
    ExperimentConfig config = default_config("heatmap");
    config.n = 5;
    config.n_graphs = 2;
    config.grid_resolution = 8;
    config.mixers = {MixerKind::CompleteGraph};
    config.per_graph_grids = false;
    const auto ctx = make_ctx(config, 3, "heatmap");
    const auto result = exp_heatmap(ctx);
    REQUIRE(result.gammas.size() == 8);
    REQUIRE(result.betas.size() == 8);
    REQUIRE(result.grids.size() == 1);
    const Eigen::MatrixXd& grid = result.grids[0].mean_grid;
    REQUIRE(grid.rows() == 8);
    REQUIRE(grid.cols() == 8);
    // beta = 0: phases alone never move the measurement distribution.
    for (int i = 1; i < 8; ++i)
      CHECK(grid(i, 0) == doctest::Approx(grid(0, 0)).epsilon(1e-12));
    // gamma = 0 from a Dicke start: the state is a mixer eigenvector, so
    // the expectation is flat along beta as well.
    for (int b = 1; b < 8; ++b)
      CHECK(grid(0, b) == doctest::Approx(grid(0, 0)).epsilon(1e-12));
    CHECK(fs::exists(ctx.out_dir / "heatmap_complete_mean.csv"));
    CHECK_FALSE(fs::exists(ctx.out_dir / "heatmap_complete_graph000.csv"));

    config.per_graph_grids = true;
    const auto ctx2 = make_ctx(config, 3, "heatmap_pg");
    exp_heatmap(ctx2);
    CHECK(fs::exists(ctx2.out_dir / "heatmap_complete_graph000.csv"));
    CHECK(fs::exists(ctx2.out_dir / "heatmap_complete_graph001.csv"));
  }

  TEST_CASE("std-decay levels carry sane statistics") {
    ExperimentConfig config = default_config("std-decay");
    config.n = 6;
    config.p_max = 3;
    config.samples = 40;
    config.repetitions = 6;
    config.beat_repetitions = 3;
    config.beat_cap = 300;
    const auto ctx = make_ctx(config, 13, "std_decay");
    const auto result = exp_std_decay(ctx);
    REQUIRE(result.levels.size() == 3);
    CHECK(result.levels[0].p == 1);
    CHECK(result.levels[0].beat_mean == 0.0);
    for (const auto& level : result.levels) {
      CHECK(level.best_ratio_mean > 0.0);
      CHECK(level.best_ratio_mean <= 1.0 + 1e-12);
      CHECK(level.sample_std_mean >= 0.0);
      CHECK(level.beat_cap == 300);
      CHECK(level.n_capped >= 0);
      if (level.p > 1) CHECK(level.beat_mean >= 1.0);
    }
    const std::string csv = read_text_file(ctx.out_dir / "std_decay.csv");
    CHECK(csv.find("beat_cap") != std::string::npos);
    const auto graph_json =
        nlohmann::json::parse(read_text_file(ctx.out_dir / "std_decay_graph.json"));
    CHECK(graph_json.at("n").get<int>() == 6);
  }

  TEST_CASE("angle patterns emit one row per round") {
    ExperimentConfig config = default_config("angle-patterns");
    config.n = 5;
    config.n_graphs = 3;
    config.p_levels = {2, 3};
    config.p_max = 3;
    config.budget = 30;
    config.hops = 2;
    const auto ctx = make_ctx(config, 21, "angles");
    const auto result = exp_angle_patterns(ctx);
    const int kept = 3 - result.n_skipped;
    CHECK(result.rows.size() == static_cast<std::size_t>(kept * (2 + 3)));
    for (const auto& row : result.rows) {
      CHECK((row.p == 2 || row.p == 3));
      CHECK(row.round >= 1);
      CHECK(row.round <= row.p);
      CHECK(row.gamma >= 0.0);
      CHECK(row.gamma < config.domain.gamma_max);
      CHECK(row.beta >= 0.0);
      CHECK(row.beta <= config.domain.beta_max);
    }
    const std::string csv = read_text_file(ctx.out_dir / "angle_patterns.csv");
    CHECK(csv.find("graph_id,p,round,gamma,beta") != std::string::npos);
  }

  TEST_CASE("strategy comparison writes one row per level and strategy") {
    ExperimentConfig config = default_config("strategy-compare");
    config.n = 5;
    config.n_graphs = 3;
    config.p_max = 2;
    config.budget = 25;
    config.hops = 2;
    config.reference_multiplier = 2;
    config.reference_restarts = 1;
    const auto ctx = make_ctx(config, 17, "strategy");
    const auto result = exp_strategy_compare(ctx);
    REQUIRE(result.comparison.curves.size() == 4);
    const std::string csv =
        read_text_file(ctx.out_dir / "strategy_compare.csv");
    const std::size_t header = csv.find("p,strategy,mean_ratio,ci_halfwidth\n");
    REQUIRE(header != std::string::npos);
    // 4 curves x 2 levels of data rows after the column header.
    int data_lines = 0;
    for (std::size_t pos = csv.find('\n', header) + 1;
         (pos = csv.find('\n', pos)) != std::string::npos; ++pos)
      ++data_lines;
    CHECK(data_lines == 8);
    CHECK(csv.back() == '\n');
  }
}

TEST_SUITE("experiment-determinism") {
  TEST_CASE("equal triples give byte-identical files across thread counts") {
    for (const std::string name : {"initial-compare", "heatmap"}) {
      ExperimentConfig config = default_config(name);
      config.n = 5;
      config.n_graphs = 3;
      config.p_max = name == "heatmap" ? 1 : 2;
      config.budget = 20;
      config.hops = 2;
      config.grid_resolution = 6;
      const auto ctx1 = make_ctx(config, 23, name + "_t1", 1);
      const auto ctx4 = make_ctx(config, 23, name + "_t4", 4);
      if (name == "heatmap") {
        exp_heatmap(ctx1);
        exp_heatmap(ctx4);
      } else {
        exp_initial_state_compare(ctx1);
        exp_initial_state_compare(ctx4);
      }
      const auto a = dir_contents(ctx1.out_dir);
      const auto b = dir_contents(ctx4.out_dir);
      REQUIRE(a.size() == b.size());
      REQUIRE(a.size() > 0);
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].first == b[i].first);
        CHECK(a[i].second == b[i].second);
      }
    }
  }

  TEST_CASE("different seeds change the artifacts") {
    ExperimentConfig config = default_config("gen");
    config.n = 6;
    config.n_graphs = 3;
    const auto ctx1 = make_ctx(config, 1, "seed1");
    const auto ctx2 = make_ctx(config, 2, "seed2");
    exp_gen(ctx1);
    exp_gen(ctx2);
    CHECK(read_text_file(ctx1.out_dir / "instances.json") !=
          read_text_file(ctx2.out_dir / "instances.json"));
  }
}
