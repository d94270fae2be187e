#pragma once

#include <cstdint>
#include <utility>

#include "esg/core.hpp"
#include "esg/ilp.hpp"
#include "esg/red_response.hpp"
#include "esg/report.hpp"

namespace esg {

// Outcome of independent greedy sensors against ordering sigma: sensors sit
// in channel order s_1..s_k, the target at position i passes sensor j at
// step i+j-1, and a sensor senses a passing target whenever the plan stays
// valid. Deterministic; returns (value for the ordering's owner, plan).
std::pair<double, SensingPlan> simulate_greedy(const Instance& inst,
                                               const TargetOrdering& sigma);

// Same outcome computed by stepwise event processing over steps
// 1..n+k-1. Events within a step touch disjoint sensors and targets, so the
// two computations agree on every instance; both are kept to check that.
std::pair<double, SensingPlan> simulate_greedy_stepwise(const Instance& inst,
                                                        const TargetOrdering& sigma);

struct BlueSolveResult {
  double value = 0.0;
  TargetOrdering sigma;
};

// Exact maximizer over all n! orderings; guarded to n <= 10. Ties break
// toward the lexicographically smallest position vector.
BlueSolveResult best_blue_bruteforce(const Instance& inst);

// Exact maximizer: build the ordering type by type, keyed by per-class sent
// counts and the sensors that sensed the last tau+1 targets. A class is
// admitted only with its forced outcome (first ready capable sensor in
// channel order, or survival when none is ready). Dense table for small
// state spaces, reachable-state maps otherwise.
BlueSolveResult best_blue_dp(const Instance& inst, const DpOptions& opts = {});

// Exact maximizer for the one-shot regime (effective tau >= n, every sensor
// senses at most one target): memoized search over (sent targets, spent
// sensors) sets. Guarded to n,k <= 62. Used where factorial and windowed
// approaches are out of reach, e.g. adversarial instances with huge tau.
struct SingleUseOptions {
  uint64_t state_budget = 80'000'000;
};
BlueSolveResult best_blue_single_use(const Instance& inst,
                                     const SingleUseOptions& opts = {});

// Position/assignment model of the greedy pipeline: integer positions z_i,
// assignment binaries x_{i,j}, coverage binaries y_{i,i',j} (target i keeps
// sensor j recharging while i' passes), order binaries o_{i,i'} for the
// recharge distance, and pairwise-distinctness binaries d_{i,i'}. The
// greedy-forcing rows make unsensed-or-late assignments possible only when
// every earlier capable sensor is covered.
IntegerModel build_blue_ilp(const Instance& inst);

struct IlpCheck {
  bool feasible = true;
  std::string violated;  // first violated constraint, construction order
};

// Embeds (sigma, psi) into the model with canonically derived witnesses:
// y_{i,i',j} = 1 iff x_{i,j} = 1 and 0 <= z_{i'} - z_i <= tau, o/d from the
// sign of the position differences. Checks every constraint.
IlpCheck check_blue_ilp(const Instance& inst, const TargetOrdering& sigma,
                        const SensingPlan& psi);

// Witness vector used by check_blue_ilp, exposed for model-level tests.
std::vector<long> blue_ilp_witness(const IntegerModel& model, const Instance& inst,
                                   const TargetOrdering& sigma, const SensingPlan& psi);

struct SaSchedule {
  double t0 = 100.0;
  double cool = 0.9;
  double floor = 1e-5;
  int restarts = 3;
  // Return each restart's final ordering instead of the best one seen.
  bool final_state_return = false;
};

// Throws std::invalid_argument unless t0, floor > 0, cool in (0,1) and
// restarts >= 1.
void check_schedule(const SaSchedule& schedule);

enum class SaVariant { Relax, Full };

// Annealing over pairwise swaps. Relax: one uniformly random neighbor per
// temperature step. Full: every neighbor is simulated and the best becomes
// the candidate (ties to the first pair (i,i'), i < i', by target index).
// Acceptance is exp((v_new - v_cur)/T) > uniform[0,1); temperatures run
// t0, t0*cool, ... down to floor; restarts use fresh random orderings and
// the best ordering seen anywhere is reported.
SolveReport sa_blue(const Instance& inst, SaVariant variant, uint64_t seed,
                    const SaSchedule& schedule = {});

}  // namespace esg
