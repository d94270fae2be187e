#pragma once

#include <array>
#include <vector>

#include "esg/core.hpp"

namespace esg {

// Adversarial instance constructions with known answers, used to stress the
// solvers. Both come with toy-scale deciders for the source problems.

struct HittingSetProblem {
  int universe_size = 0;                 // elements 0..universe_size-1
  std::vector<std::vector<int>> sets;    // each a subset of the universe
  int budget = 0;                        // size of the sought hitting set
};

// True iff some budget-sized subset intersects every set. Exhaustive over
// subsets; toy scale only.
bool hitting_set_bruteforce(const HittingSetProblem& p);

struct HittingSetReduction {
  Instance instance;
  TargetOrdering sigma;
  // The source is a yes-instance iff an exact response senses every target
  // (value 0).
};

// Element sensors vs selection/filling/set/dummy targets arranged in rounds;
// all values 1, recharge 2|U|+1. Requires budget >= 2 and |U| > budget.
// Group-internal orders left open by the layout are fixed to ascending
// construction order.
HittingSetReduction reduce_hitting_set(const HittingSetProblem& p);

// Formula with three literals per clause where every variable appears in
// exactly two clauses positively and in exactly one clause negatively
// (counted per distinct clause; literals may repeat inside a clause).
// Literals are +-(v+1) for variable v.
struct R3SatFormula {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;
};

// Throws std::invalid_argument when the occurrence restriction fails.
void validate_r3sat(const R3SatFormula& f);

// Exhaustive over assignments; toy scale only.
bool r3sat_bruteforce(const R3SatFormula& f);

struct R3SatReduction {
  Instance instance;  // sensor order = column order
  int threshold = 0;  // satisfiable iff some ordering keeps >= threshold targets
};

// Clause sensors/targets plus a per-variable gadget of variable, dummy and
// catch sensors; unit values, unbounded recharge. Column order: clause
// sensors, dummy sensors, variable sensors, catch sensors. `variant`
// reverses the order inside each group (the layout leaves it open; the
// verdict may not depend on it).
R3SatReduction reduce_restricted_3sat(const R3SatFormula& f, int variant = 0);

}  // namespace esg
