#include "esg/reductions.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace esg {

// ---------------------------------------------------------------------------
// Hitting set
// ---------------------------------------------------------------------------

bool hitting_set_bruteforce(const HittingSetProblem& p) {
  if (p.budget < 0 || p.budget > p.universe_size) return false;
  std::vector<int> pick(static_cast<size_t>(p.budget));
  // Enumerate budget-sized subsets in lexicographic order.
  for (int i = 0; i < p.budget; ++i) pick[static_cast<size_t>(i)] = i;
  for (;;) {
    bool hits_all = true;
    for (const auto& set : p.sets) {
      bool hit = false;
      for (const int e : set)
        if (std::binary_search(pick.begin(), pick.end(), e)) {
          hit = true;
          break;
        }
      if (!hit) {
        hits_all = false;
        break;
      }
    }
    if (hits_all) return true;
    // next combination
    int i = p.budget - 1;
    while (i >= 0 && pick[static_cast<size_t>(i)] == p.universe_size - p.budget + i) --i;
    if (i < 0) return false;
    ++pick[static_cast<size_t>(i)];
    for (int j = i + 1; j < p.budget; ++j)
      pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
  }
}

HittingSetReduction reduce_hitting_set(const HittingSetProblem& p) {
  const int u = p.universe_size;
  const int m = static_cast<int>(p.sets.size());
  const int t = p.budget;
  if (t < 2) throw std::invalid_argument("hitting-set reduction requires budget >= 2");
  if (u <= t) throw std::invalid_argument("hitting-set reduction requires |U| > budget");
  for (const auto& set : p.sets)
    for (const int e : set)
      if (e < 0 || e >= u) throw std::invalid_argument("set element outside universe");

  const int n = 3 * u * m;
  const int k = u + 2 * u * m;

  Instance inst;
  inst.n = n;
  inst.k = k;
  inst.tau = 2 * u + 1;
  inst.values.assign(static_cast<size_t>(n), 1.0);
  inst.matrix.assign(static_cast<size_t>(n), std::vector<uint8_t>(static_cast<size_t>(k), 0));

  // Columns: element sensors 0..u-1, then one dummy sensor per dummy target,
  // grouped by round.
  auto dummy_sensor = [&](int round, int i) { return u + round * 2 * u + i; };

  nlohmann::json roles = nlohmann::json::array();
  int row = 0;
  auto element_row = [&](int r) {
    for (int e = 0; e < u; ++e) inst.matrix[static_cast<size_t>(r)][static_cast<size_t>(e)] = 1;
  };
  for (int round = 0; round < m; ++round) {
    for (int i = 0; i < u - t; ++i) {
      element_row(row);
      roles.push_back("selection_" + std::to_string(i + 1) + "_" + std::to_string(round + 1));
      ++row;
    }
    for (int i = 0; i < u; ++i) {
      inst.matrix[static_cast<size_t>(row)][static_cast<size_t>(dummy_sensor(round, i))] = 1;
      roles.push_back("dummy_" + std::to_string(i + 1) + "_" + std::to_string(round + 1));
      ++row;
    }
    for (const int e : p.sets[static_cast<size_t>(round)])
      inst.matrix[static_cast<size_t>(row)][static_cast<size_t>(e)] = 1;
    roles.push_back("set_" + std::to_string(round + 1));
    ++row;
    for (int i = 0; i < t - 1; ++i) {
      element_row(row);
      roles.push_back("filling_" + std::to_string(i + 1) + "_" + std::to_string(round + 1));
      ++row;
    }
    for (int i = u; i < 2 * u; ++i) {
      inst.matrix[static_cast<size_t>(row)][static_cast<size_t>(dummy_sensor(round, i))] = 1;
      roles.push_back("dummy_" + std::to_string(i + 1) + "_" + std::to_string(round + 1));
      ++row;
    }
  }

  inst.metadata = {{"generator", "hitting-set-reduction"},
                   {"universe", u},
                   {"sets", p.sets},
                   {"budget", t},
                   {"target_roles", roles}};

  HittingSetReduction red;
  red.instance = std::move(inst);
  // Rows are already laid out in channel order.
  red.sigma = TargetOrdering::identity(n);
  return red;
}

// ---------------------------------------------------------------------------
// Restricted 3-SAT
// ---------------------------------------------------------------------------

void validate_r3sat(const R3SatFormula& f) {
  if (f.num_vars < 1) throw std::invalid_argument("formula needs at least one variable");
  std::vector<std::set<int>> pos(static_cast<size_t>(f.num_vars));
  std::vector<std::set<int>> neg(static_cast<size_t>(f.num_vars));
  for (size_t c = 0; c < f.clauses.size(); ++c) {
    for (const int lit : f.clauses[c]) {
      if (lit == 0 || std::abs(lit) > f.num_vars)
        throw std::invalid_argument("literal out of range");
      const int v = std::abs(lit) - 1;
      if (lit > 0)
        pos[static_cast<size_t>(v)].insert(static_cast<int>(c));
      else
        neg[static_cast<size_t>(v)].insert(static_cast<int>(c));
    }
  }
  for (int v = 0; v < f.num_vars; ++v) {
    if (pos[static_cast<size_t>(v)].size() != 2 || neg[static_cast<size_t>(v)].size() != 1)
      throw std::invalid_argument("variable " + std::to_string(v + 1) +
                                  " must appear positively in exactly two clauses and "
                                  "negatively in exactly one");
  }
}

bool r3sat_bruteforce(const R3SatFormula& f) {
  const int nv = f.num_vars;
  for (uint64_t mask = 0; mask < (1ull << nv); ++mask) {
    bool ok = true;
    for (const auto& clause : f.clauses) {
      bool sat = false;
      for (const int lit : clause) {
        const int v = std::abs(lit) - 1;
        const bool val = (mask >> v) & 1;
        if ((lit > 0) == val) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

R3SatReduction reduce_restricted_3sat(const R3SatFormula& f, int variant) {
  validate_r3sat(f);
  const int nv = f.num_vars;
  const int nc = static_cast<int>(f.clauses.size());

  // Per variable: the two positive clauses (ascending) and the negative one.
  std::vector<std::array<int, 3>> occ(static_cast<size_t>(nv), {-1, -1, -1});
  for (int c = 0; c < nc; ++c)
    for (const int lit : f.clauses[static_cast<size_t>(c)]) {
      const int v = std::abs(lit) - 1;
      auto& o = occ[static_cast<size_t>(v)];
      if (lit > 0) {
        if (o[0] == -1)
          o[0] = c;
        else if (o[0] != c && o[1] == -1)
          o[1] = c;
      } else {
        o[2] = c;
      }
    }

  const int n = nc + 7 * nv;
  const int k = nc + 8 * nv;

  // Column groups in channel order: clause, dummy, variable, catch.
  const int dummy_base = nc;
  const int var_base = nc + 2 * nv;
  const int catch_base = nc + 5 * nv;
  auto group_col = [&](int base, int size, int offset) {
    return variant == 0 ? base + offset : base + size - 1 - offset;
  };
  auto s_clause = [&](int c) { return group_col(0, nc, c); };
  auto s_dummy = [&](int x, int i) { return group_col(dummy_base, 2 * nv, 2 * x + i); };
  auto s_var = [&](int x, int i) { return group_col(var_base, 3 * nv, 3 * x + i); };  // i: 0,1 positive, 2 negated
  auto s_catch = [&](int x, int i) { return group_col(catch_base, 3 * nv, 3 * x + i); };

  Instance inst;
  inst.n = n;
  inst.k = k;
  inst.tau = kInfiniteTau;
  inst.values.assign(static_cast<size_t>(n), 1.0);
  inst.matrix.assign(static_cast<size_t>(n), std::vector<uint8_t>(static_cast<size_t>(k), 0));

  nlohmann::json roles = nlohmann::json::array();
  int row = 0;
  auto mark = [&](int r, int col) {
    inst.matrix[static_cast<size_t>(r)][static_cast<size_t>(col)] = 1;
  };
  for (int c = 0; c < nc; ++c) {
    mark(row, s_clause(c));
    roles.push_back("clause_" + std::to_string(c + 1));
    ++row;
  }
  for (int x = 0; x < nv; ++x) {
    const auto& o = occ[static_cast<size_t>(x)];
    // literal targets
    mark(row, s_clause(o[0]));
    mark(row, s_var(x, 0));
    mark(row, s_catch(x, 0));
    roles.push_back("pos1_x" + std::to_string(x + 1));
    ++row;
    mark(row, s_clause(o[1]));
    mark(row, s_var(x, 1));
    mark(row, s_catch(x, 1));
    roles.push_back("pos2_x" + std::to_string(x + 1));
    ++row;
    mark(row, s_clause(o[2]));
    mark(row, s_var(x, 2));
    mark(row, s_catch(x, 2));
    roles.push_back("neg_x" + std::to_string(x + 1));
    ++row;
    // dummy targets
    mark(row, s_var(x, 0));
    mark(row, s_dummy(x, 0));
    roles.push_back("du1_x" + std::to_string(x + 1));
    ++row;
    mark(row, s_var(x, 2));
    mark(row, s_dummy(x, 0));
    roles.push_back("du2_x" + std::to_string(x + 1));
    ++row;
    mark(row, s_var(x, 2));
    mark(row, s_dummy(x, 1));
    roles.push_back("du3_x" + std::to_string(x + 1));
    ++row;
    mark(row, s_var(x, 1));
    mark(row, s_dummy(x, 1));
    roles.push_back("du4_x" + std::to_string(x + 1));
    ++row;
  }

  inst.metadata = {{"generator", "r3sat-reduction"},
                   {"variables", nv},
                   {"clauses", f.clauses},
                   {"variant", variant},
                   {"target_roles", roles}};

  R3SatReduction red;
  red.instance = std::move(inst);
  red.threshold = nc + 2 * nv;
  return red;
}

}  // namespace esg
