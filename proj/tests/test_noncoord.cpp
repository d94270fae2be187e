#include "doctest.h"

#include "esg/generators.hpp"
#include "esg/noncoord.hpp"
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

Instance random_instance(SplitMix64& rng, int n, int k, int tau, int kind_sel) {
  GeneratorConfig cfg;
  cfg.kind = kind_sel == 0   ? GeneratorConfig::Kind::Default
             : kind_sel == 1 ? GeneratorConfig::Kind::Euclidean
             : kind_sel == 2 ? GeneratorConfig::Kind::RandomLevel
                             : GeneratorConfig::Kind::Append;
  cfg.n = n;
  cfg.k = k;
  cfg.tau = tau;
  cfg.p = 0.4;
  cfg.seed = rng.next();
  return generate(cfg);
}

}  // namespace

TEST_CASE("pipeline outcome for canonical shapes") {
  // one all-capable sensor, unlimited recharge: only the first mover is lost
  const Instance one = make(3, 1, kInfiniteTau, {1, 2, 4}, {{1}, {1}, {1}});
  TargetOrdering sigma;
  sigma.positions = {2, 3, 1};  // t3 first
  auto [v, psi] = simulate_greedy(one, sigma);
  CHECK(v == doctest::Approx(3.0));
  CHECK(psi.sensor_of == std::vector<int>{0, 0, 1});

  // two all-capable sensors: first two movers fall to s1 then s2
  const Instance two = make(3, 2, kInfiniteTau, {1, 2, 4}, {{1, 1}, {1, 1}, {1, 1}});
  auto [v2, psi2] = simulate_greedy(two, TargetOrdering::identity(3));
  CHECK(v2 == doctest::Approx(4.0));
  CHECK(psi2.sensor_of == std::vector<int>{1, 2, 0});

  // zero recharge: one sensor takes everything
  const Instance zero = make(3, 1, 0, {1, 2, 4}, {{1}, {1}, {1}});
  CHECK(simulate_greedy(zero, TargetOrdering::identity(3)).first == 0.0);
}

TEST_CASE("stepwise event processing equals the nested loop") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(7));
    const int k = static_cast<int>(rng.next_below(5));
    const int tau = static_cast<int>(rng.next_below(4));
    Instance inst = random_instance(rng, n, std::max(k, 1), tau, trial % 4);
    if (k == 0) {
      inst.k = 0;
      for (auto& row : inst.matrix) row.clear();
    }
    TargetOrdering sigma;
    sigma.positions = random_positions(n, rng);
    const auto a = simulate_greedy(inst, sigma);
    const auto b = simulate_greedy_stepwise(inst, sigma);
    CHECK(a.first == b.first);
    CHECK(a.second.sensor_of == b.second.sensor_of);
  }
}

TEST_CASE("greedy outcomes are maximal and valid") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(6));
    const int k = 1 + static_cast<int>(rng.next_below(4));
    const int tau = static_cast<int>(rng.next_below(4));
    const Instance inst = random_instance(rng, n, k, tau, trial % 4);
    TargetOrdering sigma;
    sigma.positions = random_positions(n, rng);
    const auto [v, psi] = simulate_greedy(inst, sigma);
    CHECK(validate_plan(inst, sigma, psi).valid());
    CHECK(plan_value(inst, psi) == doctest::Approx(v));

    // no missed opportunity: a capable sensor earlier than the one that
    // fired (or any sensor, for survivors) cannot be patched in
    for (int t = 0; t < n; ++t) {
      const int fired = psi.sensor_of[static_cast<size_t>(t)];
      const int limit = fired == 0 ? k : fired - 1;
      for (int j = 1; j <= limit; ++j) {
        if (!inst.capable(t, j - 1)) continue;
        SensingPlan patched = psi;
        patched.sensor_of[static_cast<size_t>(t)] = j;
        CHECK_FALSE(validate_plan(inst, sigma, patched).valid());
      }
    }
  }
}

TEST_CASE("exhaustive ordering search on degenerate shapes") {
  const Instance solo = make(1, 1, 0, {0.4}, {{1}});
  auto r = best_blue_bruteforce(solo);
  CHECK(r.value == 0.0);
  CHECK(r.sigma.positions == std::vector<int>{1});

  const Instance idle = make(3, 0, 2, {0.25, 0.5, 1.0}, {{}, {}, {}});
  r = best_blue_bruteforce(idle);
  CHECK(r.value == doctest::Approx(1.75));
  CHECK(r.sigma.positions == std::vector<int>{1, 2, 3});  // lexicographic tie-break
}

TEST_CASE("type dp closed forms") {
  // uniform type, one all-capable sensor: exactly one target is lost
  const Instance uni = make(4, 1, kInfiniteTau, {0.5, 0.5, 0.5, 0.5},
                            {{1}, {1}, {1}, {1}});
  CHECK(best_blue_dp(uni).value == doctest::Approx(1.5));

  const Instance idle = make(3, 0, 1, {0.25, 0.5, 1.0}, {{}, {}, {}});
  CHECK(best_blue_dp(idle).value == doctest::Approx(1.75));
}

TEST_CASE("type dp equals brute force and reconstructs a witness") {
  SplitMix64 rng(2718);
  const int taus[] = {0, 1, 2, kInfiniteTau};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(5));
    const int k = 1 + static_cast<int>(rng.next_below(4));
    const Instance inst = random_instance(rng, n, k, taus[rng.next_below(4)], trial % 4);
    const auto brute = best_blue_bruteforce(inst);
    const auto dp = best_blue_dp(inst);
    CHECK(dp.value == doctest::Approx(brute.value).epsilon(1e-12));
    REQUIRE(dp.sigma.is_permutation());
    CHECK(simulate_greedy(inst, dp.sigma).first == doctest::Approx(dp.value));
  }
}

TEST_CASE("type dp equals brute force when classes really collapse") {
  SplitMix64 rng(1618);
  const int taus[] = {0, 1, 2, kInfiniteTau};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(4));
    const int k = 1 + static_cast<int>(rng.next_below(3));
    Instance inst = random_instance(rng, n, k, taus[rng.next_below(4)], trial % 4);
    // quantized values and duplicated rows force multi-member classes
    for (auto& v : inst.values) v = 0.25 * static_cast<double>(1 + rng.next_below(3));
    for (int t = 1; t < n; ++t)
      if (rng.next_below(2) == 0) {
        inst.matrix[static_cast<size_t>(t)] = inst.matrix[static_cast<size_t>(t - 1)];
        inst.values[static_cast<size_t>(t)] = inst.values[static_cast<size_t>(t - 1)];
      }
    const TypePartition types = compute_types(inst);
    CAPTURE(types.n_chi());
    const auto dp = best_blue_dp(inst);
    const auto brute = best_blue_bruteforce(inst);
    CHECK(dp.value == doctest::Approx(brute.value).epsilon(1e-12));
    CHECK(simulate_greedy(inst, dp.sigma).first == doctest::Approx(dp.value));
  }
}

TEST_CASE("one-shot search equals brute force when recharge is unbounded") {
  SplitMix64 rng(31415);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(7));
    const int k = 1 + static_cast<int>(rng.next_below(5));
    const Instance inst = random_instance(rng, n, k, kInfiniteTau, trial % 4);
    const auto exact = best_blue_single_use(inst);
    CHECK(exact.value == doctest::Approx(best_blue_bruteforce(inst).value).epsilon(1e-12));
    REQUIRE(exact.sigma.is_permutation());
    CHECK(simulate_greedy(inst, exact.sigma).first == doctest::Approx(exact.value));
  }
  const Instance bounded = make(2, 1, 0, {1, 1}, {{1}, {1}});
  CHECK_THROWS_AS(best_blue_single_use(bounded), std::invalid_argument);
}

TEST_CASE("pipeline model has the expected variable counts") {
  SplitMix64 rng(5);
  const Instance inst = random_instance(rng, 3, 2, 1, 0);
  const IntegerModel m = build_blue_ilp(inst);
  int z = 0, x = 0, y = 0, o = 0, d = 0;
  for (const auto& v : m.variables) {
    if (v.name[0] == 'z') ++z;
    if (v.name[0] == 'x') ++x;
    if (v.name[0] == 'y') ++y;
    if (v.name[0] == 'o') ++o;
    if (v.name[0] == 'd') ++d;
  }
  CHECK(z == 3);
  CHECK(x == 9);
  CHECK(y == 18);
  CHECK(o == 9);
  CHECK(d == 9);
  CHECK(m.count_variables(ModelVariable::Type::Integer) == 3);
}

TEST_CASE("pipeline model forces the single capable assignment") {
  const Instance inst = make(1, 1, 0, {1.0}, {{1}});
  const IntegerModel m = build_blue_ilp(inst);
  const auto sol = enumerate_optimum(m);
  REQUIRE(sol.has_value());
  CHECK(sol->assignment[static_cast<size_t>(m.variable_index("x_1_1"))] == 1);
  CHECK(sol->objective == doctest::Approx(0.0));
}

TEST_CASE("greedy outcomes embed feasibly into the pipeline model") {
  SplitMix64 rng(607);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(5));
    const int k = 1 + static_cast<int>(rng.next_below(4));
    const int tau = static_cast<int>(rng.next_below(4));
    const Instance inst = random_instance(rng, n, k, tau, trial % 4);
    TargetOrdering sigma;
    sigma.positions = random_positions(n, rng);
    const auto [v, psi] = simulate_greedy(inst, sigma);
    const auto check = check_blue_ilp(inst, sigma, psi);
    INFO("violated: " << check.violated);
    CHECK(check.feasible);
  }
}

TEST_CASE("dropping an assignment trips the greedy-forcing rows") {
  SplitMix64 rng(608);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(4));
    const int k = 1 + static_cast<int>(rng.next_below(3));
    const Instance inst = random_instance(rng, n, k, static_cast<int>(rng.next_below(3)),
                                          trial % 4);
    TargetOrdering sigma;
    sigma.positions = random_positions(n, rng);
    auto [v, psi] = simulate_greedy(inst, sigma);
    int sensed = -1;
    for (int t = 0; t < n; ++t)
      if (psi.sensor_of[static_cast<size_t>(t)] != 0) sensed = t;
    if (sensed < 0) continue;
    // clear one assignment; its sensor now never fires, so the target
    // "passed unsensed" without cover
    psi.sensor_of[static_cast<size_t>(sensed)] = 0;
    const auto check = check_blue_ilp(inst, sigma, psi);
    CHECK_FALSE(check.feasible);
    CHECK(check.violated.rfind("greedy_", 0) == 0);
  }
}

TEST_CASE("pipeline model embeddings survive more sensors than targets") {
  SplitMix64 rng(4242);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_instance(rng, 3, 7, static_cast<int>(rng.next_below(3)),
                                          trial % 4);
    TargetOrdering sigma;
    sigma.positions = random_positions(3, rng);
    const auto [v, psi] = simulate_greedy(inst, sigma);
    const auto check = check_blue_ilp(inst, sigma, psi);
    INFO("violated: " << check.violated);
    CHECK(check.feasible);
  }
}

TEST_CASE("empty plan on a blind instance is feasible") {
  const Instance blind = make(3, 2, 1, {1, 1, 1}, {{0, 0}, {0, 0}, {0, 0}});
  CHECK(check_blue_ilp(blind, TargetOrdering::identity(3), SensingPlan::empty(3)).feasible);
}

TEST_CASE("annealing basics") {
  const Instance solo = make(1, 1, kInfiniteTau, {0.7}, {{1}});
  const auto r = sa_blue(solo, SaVariant::Relax, 9);
  CHECK(r.value == doctest::Approx(0.0));  // the lone target is sensed

  SplitMix64 rng(4070);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(rng, 6, 3, 2, trial % 4);
    for (const auto variant : {SaVariant::Relax, SaVariant::Full}) {
      const auto report = sa_blue(inst, variant, trial);
      // the reported ordering reproduces the reported value
      CHECK(simulate_greedy(inst, report.sigma).first == doctest::Approx(report.value));
      // bounded by the optimum
      CHECK(report.value <= best_blue_bruteforce(inst).value + 1e-9);
      // deterministic for a fixed seed
      const auto again = sa_blue(inst, variant, trial);
      CHECK(again.value == report.value);
      CHECK(again.sigma.positions == report.sigma.positions);
    }
    // best-seen reporting dominates the literal final-state return
    SaSchedule literal;
    literal.final_state_return = true;
    CHECK(sa_blue(inst, SaVariant::Relax, trial, literal).value <=
          sa_blue(inst, SaVariant::Relax, trial).value + 1e-12);
    SaSchedule runaway;
    runaway.cool = 1.0;
    CHECK_THROWS_AS(sa_blue(inst, SaVariant::Relax, trial, runaway), std::invalid_argument);
  }
}
