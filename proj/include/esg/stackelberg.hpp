#pragma once

#include <cstdint>
#include <string>

#include "esg/core.hpp"
#include "esg/ilp.hpp"
#include "esg/noncoord.hpp"
#include "esg/red_response.hpp"
#include "esg/report.hpp"

namespace esg {

enum class RedSolver { Dp, Brute };

// Exact leader optimum: every ordering against an exact response. Guarded
// to n <= 9. Ties break toward the lexicographically smallest position
// vector.
SolveReport stackelberg_bruteforce(const Instance& inst, RedSolver red = RedSolver::Dp,
                                   const DpOptions& dp_opts = {});

// Leader/follower model pair. The outer program owns integer positions z_i
// and gap binaries l_{i,j} (target i at least tau+1 positions before j),
// distinctness binaries d_{i,i'}, and maximizes the survivor value; the
// inner program owns the assignment binaries and minimizes the same value
// subject to capability and the l-gated recharge rows. The inner model
// declares the l variables it reads; bind them with instantiate_inner.
struct BilevelModel {
  IntegerModel outer;
  IntegerModel inner;
  std::string linkage;
};

BilevelModel build_bilevel(const Instance& inst);

// Inner model with the outer l variables fixed from a concrete ordering:
// what the follower solves once the leader has committed.
IntegerModel instantiate_inner(const Instance& inst, const TargetOrdering& sigma);

// Embeds sigma into z/l/d and psi into the assignment variables, then checks
// every outer and inner constraint.
IlpCheck check_bilevel(const Instance& inst, const TargetOrdering& sigma,
                       const SensingPlan& psi);

// The (outer, inner) witness vectors that embedding builds; exposed so model
// consumers can evaluate objectives on them.
std::pair<std::vector<long>, std::vector<long>> bilevel_witness(
    const BilevelModel& bm, const Instance& inst, const TargetOrdering& sigma,
    const SensingPlan& psi);

struct StackelbergSaOptions {
  SaSchedule schedule;
  double mu = 0.1;          // exactly-solved fraction of screened neighbors
  bool always_move = false; // skip the acceptance draw, always take the candidate
};

// Annealing with an exact response per candidate. Relax: one random
// neighbor per step. Full: all neighbors screened with the random greedy
// response, the top ceil(mu*|N|) (ties at the boundary included) solved
// exactly, the best exact neighbor becoming the candidate.
SolveReport sa_stackelberg(const Instance& inst, SaVariant variant, uint64_t seed,
                           const StackelbergSaOptions& opts = {});

// Full-neighborhood exact ascent from a seeded random ordering; stops at a
// swap-local maximum.
SolveReport local_search_stackelberg(const Instance& inst, uint64_t seed);

enum class Responder { Coordinated, Greedy };

// Best of `samples` seeded random orderings under the chosen responder;
// samples = 1 is the single arbitrary-ordering baseline.
SolveReport random_baseline(const Instance& inst, int samples, uint64_t seed,
                            Responder responder);

struct GapResult {
  double v_greedy = 0.0;
  double v_coord = 0.0;
  double gap = 0.0;              // (v_greedy - v_coord) / v_greedy; 0 when both 0
  bool solver_inconsistency = false;  // v_greedy < v_coord (impossible exactly)
};

GapResult coordination_gap(double v_greedy, double v_coord);

// Exact route: exhaustive orderings on both sides. Heuristic route: sa
// relax on both sides.
GapResult coordination_gap_exact(const Instance& inst);
GapResult coordination_gap_heuristic(const Instance& inst, uint64_t seed);

}  // namespace esg
