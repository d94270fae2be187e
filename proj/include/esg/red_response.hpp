#pragma once

#include <cstdint>
#include <utility>

#include "esg/core.hpp"
#include "esg/ilp.hpp"

namespace esg {

struct RedSolveResult {
  double value = 0.0;
  SensingPlan plan;
};

// Exact minimizer by depth-first enumeration over per-target choices
// (capable sensors or none) with validity and value pruning. Guarded to
// n <= 12, k <= 6. Ties break toward the lexicographically smallest
// target-indexed assignment vector (none = 0 < any sensor).
RedSolveResult best_red_bruteforce(const Instance& inst, const TargetOrdering& sigma);

struct DpOptions {
  uint64_t work_budget = 100'000'000;  // table-cell updates
  bool use_types = true;               // false: every sensor its own class
};

// Exact minimizer: scan targets in position order keeping, per state, the
// sensor classes that sensed the last tau+1 targets. Sensors of one class
// act as a pooled meta-sensor capped at the class size per window. Small
// windows run on a dense table; otherwise only reachable window signatures
// are stored, which keeps highly structured instances (huge tau, many
// sensors, few classes alive per window) far under the work budget.
RedSolveResult best_red_dp(const Instance& inst, const TargetOrdering& sigma,
                           const DpOptions& opts = {});

enum class GreedyPolicy { Random, RemainingValue, Harm };

const char* policy_name(GreedyPolicy p);

// Quadratic-time heuristics: targets in decreasing value (ties: lower
// index), each grabbed by a sensor that keeps the plan valid. Random picks
// uniformly; RemainingValue picks the sensor with the least summed value of
// still-unprocessed capable targets; Harm restricts that sum to targets
// within the recharge window around the current position. Sensor ties break
// toward the lowest index. Deterministic for a fixed seed.
RedSolveResult greedy_red(const Instance& inst, const TargetOrdering& sigma,
                          GreedyPolicy policy, uint64_t seed);

// Binary program for the exact response: x_{i,j} assigns position i to
// sensor j, j = k+1 meaning unsensed; rows are re-indexed into position
// order. Partition, capability, and sliding-window constraints.
IntegerModel build_red_ilp(const Instance& inst, const TargetOrdering& sigma);

}  // namespace esg
