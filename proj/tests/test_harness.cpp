#include "doctest.h"

#include <cmath>

#include "esg/harness.hpp"
#include "esg/noncoord.hpp"
#include "esg/stackelberg.hpp"

using namespace esg;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  CellConfig cell;
  cell.id = "def-n5-k2-tau2";
  cell.gen.kind = GeneratorConfig::Kind::Default;
  cell.gen.n = 5;
  cell.gen.k = 2;
  cell.gen.tau = 2;
  cfg.cells = {cell};
  cfg.solvers = {"stack:brute", "stack:random:5"};
  cfg.replicas = 12;
  cfg.master_seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("seeds depend on ids, not grid position") {
  CHECK(replica_seed(1, "a", 0) != replica_seed(1, "a", 1));
  CHECK(replica_seed(1, "a", 0) != replica_seed(1, "b", 0));
  CHECK(replica_seed(1, "a", 3) == replica_seed(1, "a", 3));
  CHECK(solver_seed(1, "a", 0, "s1") != solver_seed(1, "a", 0, "s2"));
}

TEST_CASE("zero replicas produce an empty table") {
  ExperimentConfig cfg = small_config();
  cfg.replicas = 0;
  const ResultsTable t = run_experiment(cfg);
  CHECK(t.rows.empty());
  CHECK(t.raw.empty());
}

TEST_CASE("experiment output is byte-stable") {
  const ExperimentConfig cfg = small_config();
  const std::string a = run_experiment(cfg).to_csv();
  const std::string b = run_experiment(cfg).to_csv();
  CHECK(a == b);
  CHECK(a.find("mean_utility") != std::string::npos);
}

TEST_CASE("aggregation matches a long-double two-pass reference") {
  const ResultsTable t = run_experiment(small_config());
  for (const auto& row : t.rows) {
    const auto& raw = t.raw.at({row.cell_id, row.solver});
    REQUIRE(static_cast<int>(raw.size()) == row.stats.replicas);
    long double mean = 0.0L;
    for (const double v : raw) mean += v;
    mean /= static_cast<long double>(raw.size());
    long double acc = 0.0L;
    for (const double v : raw) acc += (v - mean) * (v - mean);
    const long double sd = std::sqrt(acc / static_cast<long double>(raw.size() - 1));
    CHECK(std::abs(row.stats.mean_utility - static_cast<double>(mean)) <=
          1e-12 * std::max<long double>(1.0L, std::abs(mean)));
    CHECK(std::abs(row.stats.std_utility - static_cast<double>(sd)) <=
          1e-12 * std::max<long double>(1.0L, std::abs(sd)));
  }
}

TEST_CASE("paired comparison: self is all ties, exact dominates sampling") {
  const ResultsTable t = run_experiment(small_config());
  const auto self = paired_compare(t, "stack:brute", "stack:brute");
  REQUIRE(self.cells.size() == 1);
  CHECK(self.cells[0].equal == 12);

  const auto versus = paired_compare(t, "stack:brute", "stack:random:5");
  CHECK(versus.cells[0].b_greater == 0);  // argmax over all orderings dominates
  CHECK(versus.cells[0].mean_diff >= 0.0);

  CHECK_THROWS_AS(paired_compare(t, "stack:brute", "missing"), std::invalid_argument);
}

TEST_CASE("every solver sees the identical instance per replica") {
  // blue:brute and blue:dp are independent exact routes; equality of every
  // paired replica implies the instances matched
  ExperimentConfig cfg = small_config();
  cfg.solvers = {"blue:brute", "blue:dp"};
  cfg.replicas = 10;
  const ResultsTable t = run_experiment(cfg);
  const auto cmp = paired_compare(t, "blue:brute", "blue:dp");
  CHECK(cmp.cells[0].equal == 10);
}

TEST_CASE("config json round-trips") {
  const ExperimentConfig cfg = small_config();
  const ExperimentConfig back = experiment_from_json(experiment_to_json(cfg));
  CHECK(back.cells.size() == cfg.cells.size());
  CHECK(back.cells[0].id == cfg.cells[0].id);
  CHECK(back.solvers == cfg.solvers);
  CHECK(back.replicas == cfg.replicas);
  CHECK(back.master_seed == cfg.master_seed);
}

TEST_CASE("presets exist and the large grids are flagged") {
  const auto& presets = experiment_presets();
  CHECK(presets.count("coordinated-small-exact") == 1);
  CHECK(presets.count("greedy-medium-heuristics") == 1);
  CHECK(presets.at("coordinated-large-heuristics").long_running);
  CHECK(presets.at("greedy-large-heuristics").long_running);
  CHECK(presets.at("coordinated-large-heuristics").config.replicas == 9);
  CHECK_FALSE(presets.at("coordinated-small-exact").long_running);
}

TEST_CASE("unknown solvers are rejected up front") {
  ExperimentConfig cfg = small_config();
  cfg.solvers = {"nope"};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("an exhausted time budget marks the cell incomplete and moves on") {
  ExperimentConfig cfg = small_config();
  cfg.replicas = 8;
  cfg.cell_time_budget_seconds = 1e-9;
  const ResultsTable t = run_experiment(cfg);
  REQUIRE_FALSE(t.rows.empty());
  CHECK_FALSE(t.rows[0].complete);
  CHECK(t.rows[0].stats.replicas < 8);
}

TEST_CASE("sampled orderings find the leader optimum on most small replicas") {
  ExperimentConfig cfg;
  CellConfig cell;
  cell.id = "def-n7-k3-tau2";
  cell.gen.kind = GeneratorConfig::Kind::Default;
  cell.gen.n = 7;
  cell.gen.k = 3;
  cell.gen.tau = 2;
  cfg.cells = {cell};
  cfg.solvers = {"stack:brute", "stack:random:3000"};
  cfg.replicas = 50;
  cfg.master_seed = 1;
  const ResultsTable t = run_experiment(cfg);
  const auto cmp = paired_compare(t, "stack:random:3000", "stack:brute");
  CHECK(cmp.cells[0].a_greater == 0);
  CHECK(cmp.cells[0].equal >= 45);
  for (const auto& row : t.rows)
    if (row.solver == "stack:random:3000")
      CHECK(std::abs(row.stats.mean_utility - 2.29) <= 0.3);
}

TEST_CASE("pool width does not change the table") {
  const ExperimentConfig cfg = small_config();
  const std::string wide = run_experiment(cfg).to_csv();
  setenv("ESG_THREADS", "1", 1);
  const std::string narrow = run_experiment(cfg).to_csv();
  unsetenv("ESG_THREADS");
  CHECK(wide == narrow);
}
