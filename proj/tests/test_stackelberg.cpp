#include "doctest.h"

#include "esg/generators.hpp"
#include "esg/stackelberg.hpp"
#include "esg/rng.hpp"

using namespace esg;

namespace {

Instance make(int n, int k, int tau, std::vector<double> values,
              std::vector<std::vector<uint8_t>> matrix) {
  Instance inst;
  inst.n = n;
  inst.k = k;
  inst.tau = tau;
  inst.values = std::move(values);
  inst.matrix = std::move(matrix);
  check_instance(inst);
  return inst;
}

Instance random_instance(SplitMix64& rng, int n, int k, int tau, int kind_sel = 0) {
  GeneratorConfig cfg;
  cfg.kind = kind_sel == 0   ? GeneratorConfig::Kind::Default
             : kind_sel == 1 ? GeneratorConfig::Kind::Euclidean
                             : GeneratorConfig::Kind::RandomLevel;
  cfg.n = n;
  cfg.k = k;
  cfg.tau = tau;
  cfg.p = 0.4;
  cfg.seed = rng.next();
  return generate(cfg);
}

}  // namespace

TEST_CASE("leader optimum on canonical shapes") {
  // the strong target always falls, whatever the order
  const Instance duel = make(2, 1, 1, {1, 2}, {{1}, {1}});
  auto r = stackelberg_bruteforce(duel);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.sigma.positions == std::vector<int>{1, 2});  // lexicographic tie

  const Instance idle = make(3, 0, 2, {0.5, 0.25, 1.0}, {{}, {}, {}});
  CHECK(stackelberg_bruteforce(idle).value == doctest::Approx(1.75));

  CHECK_THROWS_AS(
      stackelberg_bruteforce(make(10, 1, 0, std::vector<double>(10, 1.0),
                                  std::vector<std::vector<uint8_t>>(10, {1}))),
      SizeGuardError);
}

TEST_CASE("brute responders agree and coordination can only help the sensors") {
  SplitMix64 rng(321);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(5));
    const int k = 1 + static_cast<int>(rng.next_below(3));
    const Instance inst = random_instance(rng, n, k, static_cast<int>(rng.next_below(3)),
                                          trial % 3);
    const auto via_dp = stackelberg_bruteforce(inst, RedSolver::Dp);
    const auto via_brute = stackelberg_bruteforce(inst, RedSolver::Brute);
    CHECK(via_dp.value == doctest::Approx(via_brute.value).epsilon(1e-12));

    // exact dominance against the non-coordinated optimum
    CHECK(via_dp.value <= best_blue_bruteforce(inst).value + 1e-9);

    // the reported pair is consistent: inner value recomputed from scratch
    CHECK(best_red_dp(inst, via_dp.sigma).value == doctest::Approx(via_dp.value));
    CHECK(validate_plan(inst, via_dp.sigma, via_dp.plan).valid());
  }
}

TEST_CASE("leader/follower model pair has the expected shape") {
  SplitMix64 rng(12);
  const Instance inst = random_instance(rng, 3, 2, 1);
  const BilevelModel bm = build_bilevel(inst);
  CHECK(bm.outer.count_variables(ModelVariable::Type::Integer) == 3);  // z
  int l = 0, d = 0, ox = 0;
  for (const auto& v : bm.outer.variables) {
    if (v.name[0] == 'l') ++l;
    if (v.name[0] == 'd') ++d;
    if (v.name[0] == 'x') ++ox;
  }
  CHECK(l == 9);
  CHECK(d == 9);
  CHECK(ox == 9);
  int x = 0, il = 0;
  for (const auto& v : bm.inner.variables) {
    if (v.name[0] == 'x') ++x;
    if (v.name[0] == 'l') ++il;
  }
  CHECK(x == 9);
  CHECK(il == 9);
  CHECK_FALSE(bm.linkage.empty());
}

TEST_CASE("the fixed-ordering inner model solves to the exact response") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(4));
    const int k = 1 + static_cast<int>(rng.next_below(3));
    const Instance inst = random_instance(rng, n, k, static_cast<int>(rng.next_below(3)));
    TargetOrdering sigma;
    sigma.positions = random_positions(n, rng);
    const auto sol = enumerate_optimum(instantiate_inner(inst, sigma));
    REQUIRE(sol.has_value());
    CHECK(sol->objective == doctest::Approx(best_red_dp(inst, sigma).value).epsilon(1e-12));
  }
}

TEST_CASE("bilevel witnesses embed and violations carry the recharge row") {
  SplitMix64 rng(88);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(5));
    const int k = 1 + static_cast<int>(rng.next_below(3));
    const Instance inst = random_instance(rng, n, k, static_cast<int>(rng.next_below(3)));
    const auto opt = stackelberg_bruteforce(inst);
    const auto check = check_bilevel(inst, opt.sigma, opt.plan);
    INFO("violated: " << check.violated);
    CHECK(check.feasible);
    // objective matching: the outer objective on the witness equals the
    // game value, which equals the inner optimum on the same ordering
    const BilevelModel bm = build_bilevel(inst);
    const auto witness = bilevel_witness(bm, inst, opt.sigma, opt.plan);
    CHECK(evaluate_objective(bm.outer, witness.first) == doctest::Approx(opt.value));
    CHECK(evaluate_objective(bm.inner, witness.second) == doctest::Approx(opt.value));
  }

  // a recharge-violating plan trips the shared-sensor row
  const Instance duel = make(2, 1, 1, {1, 2}, {{1}, {1}});
  SensingPlan both = SensingPlan::empty(2);
  both.sensor_of = {1, 1};
  const auto check = check_bilevel(duel, TargetOrdering::identity(2), both);
  CHECK_FALSE(check.feasible);
  CHECK(check.violated.rfind("rech_", 0) == 0);

  // non-permutations are structural errors
  TargetOrdering broken;
  broken.positions = {1, 1};
  CHECK_THROWS_AS(check_bilevel(duel, broken, SensingPlan::empty(2)),
                  std::invalid_argument);
}

TEST_CASE("n = 1 inner model forces an assignment") {
  const Instance solo = make(1, 1, 0, {1.0}, {{1}});
  const auto sol = enumerate_optimum(instantiate_inner(solo, TargetOrdering::identity(1)));
  REQUIRE(sol.has_value());
  CHECK(sol->objective == doctest::Approx(0.0));  // x_{1,1} = 1
}

TEST_CASE("annealing against exact responses") {
  const Instance solo = make(1, 1, 0, {0.3}, {{1}});
  CHECK(sa_stackelberg(solo, SaVariant::Relax, 5).value == doctest::Approx(0.0));

  SplitMix64 rng(246);
  for (int trial = 0; trial < 12; ++trial) {
    const Instance inst = random_instance(rng, 5, 2, 2, trial % 3);
    const auto exact = stackelberg_bruteforce(inst);
    for (const auto variant : {SaVariant::Relax, SaVariant::Full}) {
      const auto report = sa_stackelberg(inst, variant, trial);
      CHECK(report.value <= exact.value + 1e-9);
      CHECK(best_red_dp(inst, report.sigma).value == doctest::Approx(report.value));
      const auto again = sa_stackelberg(inst, variant, trial);
      CHECK(again.value == report.value);
      CHECK(again.sigma.positions == report.sigma.positions);
    }
    StackelbergSaOptions always;
    always.always_move = true;
    CHECK(sa_stackelberg(inst, SaVariant::Full, trial, always).value <= exact.value + 1e-9);
    StackelbergSaOptions bad;
    bad.mu = 0.0;
    CHECK_THROWS_AS(sa_stackelberg(inst, SaVariant::Full, trial, bad), std::invalid_argument);
  }
}

TEST_CASE("exact hill climbing stops at a swap-local maximum") {
  SplitMix64 rng(135);
  for (int trial = 0; trial < 10; ++trial) {
    const Instance inst = random_instance(rng, 6, 3, 2, trial % 3);
    const auto report = local_search_stackelberg(inst, trial);
    TargetOrdering probe = report.sigma;
    for (int a = 0; a < inst.n; ++a)
      for (int b = a + 1; b < inst.n; ++b) {
        std::swap(probe.positions[static_cast<size_t>(a)],
                  probe.positions[static_cast<size_t>(b)]);
        CHECK(best_red_dp(inst, probe).value <= report.value + 1e-9);
        std::swap(probe.positions[static_cast<size_t>(a)],
                  probe.positions[static_cast<size_t>(b)]);
      }
  }
}

TEST_CASE("random baseline grows along its sample stream") {
  SplitMix64 rng(9911);
  const Instance inst = random_instance(rng, 6, 3, 2);
  for (const auto responder : {Responder::Coordinated, Responder::Greedy}) {
    const double one = random_baseline(inst, 1, 31, responder).value;
    const double hundred = random_baseline(inst, 100, 31, responder).value;
    CHECK(hundred >= one - 1e-12);
  }
  const Instance idle = make(2, 0, 1, {0.5, 0.5}, {{}, {}});
  CHECK(random_baseline(idle, 3, 1, Responder::Coordinated).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(random_baseline(idle, 0, 1, Responder::Greedy), std::invalid_argument);
}

TEST_CASE("coordination gap arithmetic and diagnostics") {
  const auto zero = coordination_gap(0.0, 0.0);
  CHECK(zero.gap == 0.0);
  CHECK_FALSE(zero.solver_inconsistency);

  const auto g = coordination_gap(2.0, 1.5);
  CHECK(g.gap == doctest::Approx(0.25));

  CHECK(coordination_gap(1.0, 1.5).solver_inconsistency);

  const Instance idle = make(2, 0, 1, {0.5, 0.5}, {{}, {}});
  CHECK(coordination_gap_exact(idle).gap == 0.0);

  SplitMix64 rng(777);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_instance(rng, 5, 2, 2, trial % 3);
    const auto gap = coordination_gap_exact(inst);
    CHECK_FALSE(gap.solver_inconsistency);
    CHECK(gap.v_greedy >= gap.v_coord - 1e-9);
  }
}
