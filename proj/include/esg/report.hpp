#pragma once

#include <cstdint>
#include <string>

#include "esg/core.hpp"
#include "json.hpp"

namespace esg {

// Uniform result record for ordering solvers: the achieved value, the
// witness ordering and responding plan, and enough bookkeeping to reproduce
// the run.
struct SolveReport {
  double value = 0.0;
  TargetOrdering sigma;
  SensingPlan plan;
  std::string solver;
  uint64_t seed = 0;
  double wall_seconds = 0.0;
  uint64_t iterations = 0;    // annealing/search steps
  uint64_t inner_solves = 0;  // response evaluations

  nlohmann::json to_json() const {
    return {{"value", value},         {"sigma", sigma.positions},
            {"solver", solver},       {"seed", seed},
            {"wall_seconds", wall_seconds}, {"iterations", iterations},
            {"inner_solves", inner_solves}};
  }
};

}  // namespace esg
