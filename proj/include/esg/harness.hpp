#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esg/core.hpp"
#include "esg/generators.hpp"
#include "json.hpp"

namespace esg {

// Batch experiment runner: a grid of generator cells, a solver list, paired
// replicas, deterministic seeding, CSV output.

struct CellConfig {
  std::string id;       // stable identifier; seeds depend on it, not on grid position
  GeneratorConfig gen;  // seed field ignored; per-replica seeds are derived
};

struct ExperimentConfig {
  std::vector<CellConfig> cells;
  std::vector<std::string> solvers;  // registry names, e.g. "stack:brute", "blue:sa-relax"
  int replicas = 50;
  uint64_t master_seed = 0;
  double cell_time_budget_seconds = 0.0;  // 0 = unlimited
  bool record_walltime = false;  // false keeps CSV bytes run-independent
};

// Replica seeds depend only on (master, cell id, replica); solver seeds add
// the solver name. Stable under grid reordering.
uint64_t replica_seed(uint64_t master, const std::string& cell_id, int replica);
uint64_t solver_seed(uint64_t master, const std::string& cell_id, int replica,
                     const std::string& solver);

struct CellStats {
  double mean_utility = 0.0;
  double std_utility = 0.0;
  double mean_seconds = 0.0;
  double std_seconds = 0.0;
  int replicas = 0;
};

struct ResultsTable {
  struct Row {
    std::string cell_id;
    int n = 0, k = 0;
    std::string tau;  // "inf" or the number
    std::string generator;
    std::string solver;
    CellStats stats;
    bool complete = true;
  };
  std::vector<Row> rows;
  // Raw per-replica utilities, keyed by (cell id, solver); replica order.
  std::map<std::pair<std::string, std::string>, std::vector<double>> raw;

  // Byte-stable for a fixed config (times are zero unless recorded). The
  // header records the aggregation convention.
  std::string to_csv() const;
};

// Every solver sees the identical instance per (cell, replica). Replicas run
// in a worker pool capped by ESG_THREADS; aggregation order is fixed by
// replica index. A cell past its time budget is marked incomplete and the
// run continues.
ResultsTable run_experiment(const ExperimentConfig& cfg);

// Registry used by run_experiment; exposed so callers can run one solver.
using SolverFn = std::function<double(const Instance&, uint64_t seed)>;
SolverFn lookup_solver(const std::string& name);

struct PairedCell {
  std::string cell_id;
  double mean_diff = 0.0;  // mean of (A - B) over paired replicas
  int a_greater = 0;
  int equal = 0;  // |A - B| <= 1e-9
  int b_greater = 0;
};

struct PairedComparison {
  std::vector<PairedCell> cells;
};

// Pairs replicas by (cell, replica index); throws on unmatched replica sets.
PairedComparison paired_compare(const ResultsTable& table, const std::string& solver_a,
                                const std::string& solver_b);

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentConfig& cfg);

// Named configurations; the large benchmark grids are marked long_running
// and are excluded from the default test suite.
struct Preset {
  ExperimentConfig config;
  bool long_running = false;
};
const std::map<std::string, Preset>& experiment_presets();

// Stable shortest-round-trip decimal text for doubles; used by every CSV
// writer in the project.
std::string format_value(double x);

}  // namespace esg
