#include "esg/stackelberg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "esg/rng.hpp"

namespace esg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num2(const char* stem, int a, int b) {
  return std::string(stem) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

double inner_value(const Instance& inst, const TargetOrdering& sigma, RedSolver red,
                   const DpOptions& dp_opts, SensingPlan* plan_out) {
  const RedSolveResult r = red == RedSolver::Dp ? best_red_dp(inst, sigma, dp_opts)
                                                : best_red_bruteforce(inst, sigma);
  if (plan_out) *plan_out = r.plan;
  return r.value;
}

}  // namespace

SolveReport stackelberg_bruteforce(const Instance& inst, RedSolver red,
                                   const DpOptions& dp_opts) {
  check_instance(inst);
  if (inst.n > 9) throw SizeGuardError("stackelberg_bruteforce is guarded to n <= 9");
  const auto start = std::chrono::steady_clock::now();

  std::vector<int> order(static_cast<size_t>(inst.n));
  for (int i = 0; i < inst.n; ++i) order[static_cast<size_t>(i)] = i;

  SolveReport report;
  report.solver = red == RedSolver::Dp ? "stackelberg-brute(dp)" : "stackelberg-brute(brute)";
  double best = -kInf;
  std::vector<int> best_positions;
  TargetOrdering sigma;
  sigma.positions.resize(static_cast<size_t>(inst.n));
  do {
    for (size_t p = 0; p < order.size(); ++p)
      sigma.positions[static_cast<size_t>(order[p])] = static_cast<int>(p) + 1;
    ++report.inner_solves;
    const double v = inner_value(inst, sigma, red, dp_opts, nullptr);
    if (v > best) {
      best = v;
      best_positions = sigma.positions;
    } else if (v == best && sigma.positions < best_positions) {
      best_positions = sigma.positions;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  report.value = best;
  report.sigma.positions = best_positions;
  inner_value(inst, report.sigma, red, dp_opts, &report.plan);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Bilevel model
// ---------------------------------------------------------------------------

namespace {

struct OuterLayout {
  int n;
  int z(int i) const { return i - 1; }
  int l(int i, int j) const { return n + (i - 1) * n + (j - 1); }
  int d(int i, int j) const { return n + n * n + (i - 1) * n + (j - 1); }
};

}  // namespace

BilevelModel build_bilevel(const Instance& inst) {
  check_instance(inst);
  const int n = inst.n, k = inst.k;
  const int tau = inst.effective_tau();

  BilevelModel bm;
  OuterLayout L{n};

  // Outer: positions, gap indicators, distinctness, plus the assignment
  // variables it reads back from the inner optimum for its objective.
  IntegerModel& outer = bm.outer;
  outer.sense = ObjectiveSense::Maximize;
  for (int i = 1; i <= n; ++i) outer.add_integer("z_" + std::to_string(i), 1, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) outer.add_binary(num2("l", i, j));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) outer.add_binary(num2("d", i, j));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= k + 1; ++j) outer.add_binary(num2("x", i, j));
  const int outer_x_base = n + 2 * n * n;
  for (int i = 1; i <= n; ++i)
    outer.objective.push_back({outer_x_base + (i - 1) * (k + 1) + k,
                               inst.values[static_cast<size_t>(i - 1)]});

  for (int i = 1; i <= n; ++i)
    for (int i2 = i + 1; i2 <= n; ++i2) {
      outer.add_constraint(num2("distinct_lo", i, i2),
                           {{L.z(i), 1.0}, {L.z(i2), -1.0}, {L.d(i, i2), -double(n)}},
                           Relation::LessEq, -1.0);
      outer.add_constraint(num2("distinct_hi", i, i2),
                           {{L.z(i), 1.0}, {L.z(i2), -1.0}, {L.d(i, i2), -double(n)}},
                           Relation::GreaterEq, 1.0 - n);
    }
  // l_{i,j} = 1 exactly when z_j - z_i >= tau + 1. The activation side needs
  // a slack of n + tau to stay vacuous for arbitrary position pairs.
  const double big_m_gap = n + tau;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      outer.add_constraint(num2("gap_lo", i, j),
                           {{L.z(j), 1.0}, {L.z(i), -1.0}, {L.l(i, j), -big_m_gap}},
                           Relation::GreaterEq, tau + 1.0 - big_m_gap);
      outer.add_constraint(num2("gap_hi", i, j),
                           {{L.z(j), 1.0}, {L.z(i), -1.0}, {L.l(i, j), -double(n)}},
                           Relation::LessEq, static_cast<double>(tau));
    }

  // Inner: assignment binaries plus the l variables it reads (bound by the
  // outer program; see linkage).
  IntegerModel& inner = bm.inner;
  inner.sense = ObjectiveSense::Minimize;
  std::vector<std::vector<int>> x(static_cast<size_t>(n),
                                  std::vector<int>(static_cast<size_t>(k) + 1, -1));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= k + 1; ++j)
      x[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] = inner.add_binary(num2("x", i, j));
  std::vector<std::vector<int>> il(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), -1));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      il[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] = inner.add_binary(num2("l", i, j));

  for (int i = 1; i <= n; ++i)
    inner.objective.push_back({x[static_cast<size_t>(i - 1)][static_cast<size_t>(k)],
                               inst.values[static_cast<size_t>(i - 1)]});
  for (int i = 1; i <= n; ++i) {
    std::vector<LinearTerm> terms;
    for (int j = 1; j <= k + 1; ++j)
      terms.push_back({x[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)], 1.0});
    inner.add_constraint("assign_" + std::to_string(i), std::move(terms), Relation::Equal, 1.0);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= k; ++j)
      inner.add_constraint(num2("cap", i, j),
                           {{x[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)], 1.0}},
                           Relation::LessEq, inst.capable(i - 1, j - 1) ? 1.0 : 0.0);
  // Two targets on one sensor only with a tau+1 gap in one direction.
  for (int i = 1; i <= n; ++i)
    for (int i2 = i + 1; i2 <= n; ++i2)
      for (int j = 1; j <= k; ++j) {
        inner.add_constraint(num2("rech", i, i2) + "_" + std::to_string(j),
                             {{x[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)], 1.0},
                              {x[static_cast<size_t>(i2 - 1)][static_cast<size_t>(j - 1)], 1.0},
                              {il[static_cast<size_t>(i - 1)][static_cast<size_t>(i2 - 1)], -1.0},
                              {il[static_cast<size_t>(i2 - 1)][static_cast<size_t>(i - 1)], -1.0}},
                             Relation::LessEq, 1.0);
      }

  bm.linkage =
      "the outer x variables are bound to the inner argmin (the inner program "
      "minimizes the same sum(v_i * x_{i,k+1}) the outer maximizes), and the inner "
      "l variables are bound to the outer values (l_{i,j} = 1 iff z_j - z_i >= "
      "tau+1)";
  return bm;
}

IntegerModel instantiate_inner(const Instance& inst, const TargetOrdering& sigma) {
  if (sigma.n() != inst.n || !sigma.is_permutation())
    throw std::invalid_argument("sigma is not a permutation of 1..n");
  BilevelModel bm = build_bilevel(inst);
  const int n = inst.n, k = inst.k;
  const int tau = inst.effective_tau();

  IntegerModel m;
  m.sense = ObjectiveSense::Minimize;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= k + 1; ++j) m.add_binary(num2("x", i, j));
  m.objective = bm.inner.objective;  // x variables share the same indices

  auto lval = [&](int i, int j) {
    return sigma.positions[static_cast<size_t>(j - 1)] -
                       sigma.positions[static_cast<size_t>(i - 1)] >=
                   tau + 1
               ? 1.0
               : 0.0;
  };
  const int x_count = n * (k + 1);
  for (const auto& c : bm.inner.constraints) {
    LinearConstraint fixed;
    fixed.name = c.name;
    fixed.rel = c.rel;
    fixed.rhs = c.rhs;
    for (const auto& t : c.terms) {
      if (t.var < x_count) {
        fixed.terms.push_back(t);
      } else {
        // l variable: fold the bound value into the right-hand side.
        const int flat = t.var - x_count;
        const int i = flat / n + 1, j = flat % n + 1;
        fixed.rhs -= t.coef * lval(i, j);
      }
    }
    m.constraints.push_back(std::move(fixed));
  }
  return m;
}

std::pair<std::vector<long>, std::vector<long>> bilevel_witness(
    const BilevelModel& bm, const Instance& inst, const TargetOrdering& sigma,
    const SensingPlan& psi) {
  const int n = inst.n, k = inst.k;
  const int tau = inst.effective_tau();
  OuterLayout L{n};

  std::vector<long> outer_vals(bm.outer.variables.size(), 0);
  for (int i = 1; i <= n; ++i)
    outer_vals[static_cast<size_t>(L.z(i))] = sigma.positions[static_cast<size_t>(i - 1)];
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const long zi = sigma.positions[static_cast<size_t>(i - 1)];
      const long zj = sigma.positions[static_cast<size_t>(j - 1)];
      if (zj - zi >= tau + 1) outer_vals[static_cast<size_t>(L.l(i, j))] = 1;
      if (zi > zj) outer_vals[static_cast<size_t>(L.d(i, j))] = 1;
    }
  const int outer_x_base = n + 2 * n * n;
  for (int i = 1; i <= n; ++i) {
    const int s = psi.sensor_of[static_cast<size_t>(i - 1)];
    const int j = s == 0 ? k + 1 : s;
    outer_vals[static_cast<size_t>(outer_x_base + (i - 1) * (k + 1) + (j - 1))] = 1;
  }

  std::vector<long> inner_vals(bm.inner.variables.size(), 0);
  for (int i = 1; i <= n; ++i) {
    const int s = psi.sensor_of[static_cast<size_t>(i - 1)];
    const int j = s == 0 ? k + 1 : s;
    inner_vals[static_cast<size_t>((i - 1) * (k + 1) + (j - 1))] = 1;
  }
  const int x_count = n * (k + 1);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      inner_vals[static_cast<size_t>(x_count + (i - 1) * n + (j - 1))] =
          outer_vals[static_cast<size_t>(L.l(i, j))];
  return {std::move(outer_vals), std::move(inner_vals)};
}

IlpCheck check_bilevel(const Instance& inst, const TargetOrdering& sigma,
                       const SensingPlan& psi) {
  check_instance(inst);
  if (sigma.n() != inst.n || psi.n() != inst.n)
    throw std::invalid_argument("ordering/plan dimensions do not match instance");
  if (!sigma.is_permutation())
    throw std::invalid_argument("sigma is not a permutation of 1..n");

  const BilevelModel bm = build_bilevel(inst);
  const auto [outer_vals, inner_vals] = bilevel_witness(bm, inst, sigma, psi);
  const auto outer_check = check_assignment(bm.outer, outer_vals);
  if (!outer_check.feasible) return {false, outer_check.violated_constraint};
  const auto inner_check = check_assignment(bm.inner, inner_vals);
  if (!inner_check.feasible) return {false, inner_check.violated_constraint};
  return {};
}

// ---------------------------------------------------------------------------
// Annealing and baselines
// ---------------------------------------------------------------------------

SolveReport sa_stackelberg(const Instance& inst, SaVariant variant, uint64_t seed,
                           const StackelbergSaOptions& opts) {
  check_instance(inst);
  check_schedule(opts.schedule);
  if (!(opts.mu > 0.0) || opts.mu > 1.0)
    throw std::invalid_argument("mu must lie in (0,1]");
  const auto start = std::chrono::steady_clock::now();
  auto rng = keyed_stream(seed, "sa-stackelberg");
  const int n = inst.n;
  const DpOptions dp_opts;

  SolveReport report;
  report.solver = variant == SaVariant::Relax ? "sa-stackelberg-relax" : "sa-stackelberg-full";
  report.seed = seed;

  double best = -kInf;
  std::vector<int> best_positions;
  auto consider = [&](double v, const std::vector<int>& positions) {
    if (v > best) {
      best = v;
      best_positions = positions;
    }
  };
  auto exact_value = [&](const std::vector<int>& positions) {
    TargetOrdering s;
    s.positions = positions;
    ++report.inner_solves;
    return best_red_dp(inst, s, dp_opts).value;
  };

  double final_best = -kInf;
  std::vector<int> final_positions;
  uint64_t screen_counter = 0;

  for (int r = 0; r < opts.schedule.restarts; ++r) {
    std::vector<int> positions = random_positions(n, rng);
    double v = exact_value(positions);
    consider(v, positions);

    if (n >= 2) {
      for (double temp = opts.schedule.t0; temp > opts.schedule.floor;
           temp *= opts.schedule.cool) {
        ++report.iterations;
        std::vector<int> candidate = positions;
        double vc;
        if (variant == SaVariant::Relax) {
          const int a = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
          int b = static_cast<int>(rng.next_below(static_cast<uint64_t>(n) - 1));
          if (b >= a) ++b;
          std::swap(candidate[static_cast<size_t>(a)], candidate[static_cast<size_t>(b)]);
          vc = exact_value(candidate);
          consider(vc, candidate);
        } else {
          // Screen every neighbor with the random greedy response, then
          // solve the top mu fraction exactly (score ties at the cut kept).
          struct Neighbor {
            int a, b;
            double screen;
          };
          std::vector<Neighbor> neighbors;
          neighbors.reserve(static_cast<size_t>(n) * (n - 1) / 2);
          TargetOrdering probe;
          probe.positions = positions;
          for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
              std::swap(probe.positions[static_cast<size_t>(a)],
                        probe.positions[static_cast<size_t>(b)]);
              const double sc =
                  greedy_red(inst, probe, GreedyPolicy::Random,
                             hash_combine(seed, ++screen_counter))
                      .value;
              std::swap(probe.positions[static_cast<size_t>(a)],
                        probe.positions[static_cast<size_t>(b)]);
              neighbors.push_back({a, b, sc});
            }
          std::vector<size_t> idx(neighbors.size());
          for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
          std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            return neighbors[a].screen > neighbors[b].screen;
          });
          size_t cut = static_cast<size_t>(
              std::ceil(opts.mu * static_cast<double>(neighbors.size())));
          cut = std::max<size_t>(cut, 1);
          cut = std::min(cut, idx.size());
          while (cut < idx.size() &&
                 neighbors[idx[cut]].screen == neighbors[idx[cut - 1]].screen)
            ++cut;
          std::vector<char> chosen(neighbors.size(), 0);
          for (size_t i = 0; i < cut; ++i) chosen[idx[i]] = 1;

          double nb_best = -kInf;
          int pick_a = 0, pick_b = 1;
          for (size_t i = 0; i < neighbors.size(); ++i) {
            if (!chosen[i]) continue;
            std::vector<int> cand = positions;
            std::swap(cand[static_cast<size_t>(neighbors[i].a)],
                      cand[static_cast<size_t>(neighbors[i].b)]);
            const double nv = exact_value(cand);
            consider(nv, cand);
            if (nv > nb_best) {
              nb_best = nv;
              pick_a = neighbors[i].a;
              pick_b = neighbors[i].b;
            }
          }
          std::swap(candidate[static_cast<size_t>(pick_a)],
                    candidate[static_cast<size_t>(pick_b)]);
          vc = nb_best;
        }
        const double dv = vc - v;
        const double u = rng.next_real();
        if (opts.always_move || dv >= 0.0 || std::exp(dv / temp) > u) {
          positions = std::move(candidate);
          v = vc;
        }
      }
    }
    if (v > final_best) {
      final_best = v;
      final_positions = positions;
    }
  }

  if (opts.schedule.final_state_return) {
    report.value = final_best;
    report.sigma.positions = final_positions;
  } else {
    report.value = best;
    report.sigma.positions = best_positions;
  }
  report.plan = best_red_dp(inst, report.sigma, dp_opts).plan;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SolveReport local_search_stackelberg(const Instance& inst, uint64_t seed) {
  check_instance(inst);
  const auto start = std::chrono::steady_clock::now();
  auto rng = keyed_stream(seed, "hill-climb");
  const int n = inst.n;
  const DpOptions dp_opts;

  SolveReport report;
  report.solver = "stackelberg-hill-climb";
  report.seed = seed;

  std::vector<int> positions = random_positions(n, rng);
  auto exact_value = [&](const std::vector<int>& pos) {
    TargetOrdering s;
    s.positions = pos;
    ++report.inner_solves;
    return best_red_dp(inst, s, dp_opts).value;
  };
  double v = exact_value(positions);

  bool improved = n >= 2;
  while (improved) {
    improved = false;
    ++report.iterations;
    double nb_best = v;
    int pick_a = -1, pick_b = -1;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        std::swap(positions[static_cast<size_t>(a)], positions[static_cast<size_t>(b)]);
        const double nv = exact_value(positions);
        std::swap(positions[static_cast<size_t>(a)], positions[static_cast<size_t>(b)]);
        if (nv > nb_best) {
          nb_best = nv;
          pick_a = a;
          pick_b = b;
        }
      }
    if (pick_a >= 0) {
      std::swap(positions[static_cast<size_t>(pick_a)], positions[static_cast<size_t>(pick_b)]);
      v = nb_best;
      improved = true;
    }
  }

  report.value = v;
  report.sigma.positions = positions;
  report.plan = best_red_dp(inst, report.sigma, dp_opts).plan;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SolveReport random_baseline(const Instance& inst, int samples, uint64_t seed,
                            Responder responder) {
  check_instance(inst);
  if (samples < 1) throw std::invalid_argument("random_baseline requires samples >= 1");
  const auto start = std::chrono::steady_clock::now();
  auto rng = keyed_stream(seed, "random-orderings");
  const DpOptions dp_opts;

  SolveReport report;
  report.solver = responder == Responder::Coordinated ? "random-coordinated" : "random-greedy";
  report.seed = seed;

  double best = -kInf;
  std::vector<int> best_positions;
  std::vector<int> scratch_last(static_cast<size_t>(inst.k), 0);
  for (int s = 0; s < samples; ++s) {
    TargetOrdering sigma;
    sigma.positions = random_positions(inst.n, rng);
    ++report.inner_solves;
    const double v = responder == Responder::Coordinated
                         ? best_red_dp(inst, sigma, dp_opts).value
                         : simulate_greedy(inst, sigma).first;
    if (v > best) {
      best = v;
      best_positions = sigma.positions;
    }
  }
  report.value = best;
  report.sigma.positions = best_positions;
  report.iterations = static_cast<uint64_t>(samples);
  if (responder == Responder::Coordinated)
    report.plan = best_red_dp(inst, report.sigma, dp_opts).plan;
  else
    report.plan = simulate_greedy(inst, report.sigma).second;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

GapResult coordination_gap(double v_greedy, double v_coord) {
  GapResult g;
  g.v_greedy = v_greedy;
  g.v_coord = v_coord;
  if (v_greedy > 0.0)
    g.gap = (v_greedy - v_coord) / v_greedy;
  else
    g.gap = 0.0;
  g.solver_inconsistency = v_coord > v_greedy + kValueTolerance;
  return g;
}

GapResult coordination_gap_exact(const Instance& inst) {
  const double vg = best_blue_bruteforce(inst).value;
  const double vc = stackelberg_bruteforce(inst).value;
  return coordination_gap(vg, vc);
}

GapResult coordination_gap_heuristic(const Instance& inst, uint64_t seed) {
  const double vg = sa_blue(inst, SaVariant::Relax, seed).value;
  const double vc = sa_stackelberg(inst, SaVariant::Relax, hash_combine(seed, 1)).value;
  return coordination_gap(vg, vc);
}

}  // namespace esg
