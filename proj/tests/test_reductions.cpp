#include "doctest.h"

#include "esg/json_io.hpp"
#include "esg/noncoord.hpp"
#include "esg/red_response.hpp"
#include "esg/reductions.hpp"
#include "esg/rng.hpp"

using namespace esg;

namespace {

bool esg_senses_everything(const HittingSetReduction& red) {
  return best_red_dp(red.instance, red.sigma).value <= 1e-9;
}

}  // namespace

TEST_CASE("hitting-set decider on known cases") {
  CHECK(hitting_set_bruteforce({3, {{0}, {1}}, 2}));
  CHECK_FALSE(hitting_set_bruteforce({3, {{0}, {1}, {2}}, 2}));
  CHECK(hitting_set_bruteforce({4, {{0, 1}, {1, 2}, {2, 3}}, 2}));
  CHECK_FALSE(hitting_set_bruteforce({3, {{}}, 2}));  // an empty set is unhittable
}

TEST_CASE("hitting-set construction shape") {
  const HittingSetProblem p{3, {{0}, {1}}, 2};
  const auto red = reduce_hitting_set(p);
  CHECK(red.instance.n == 3 * 3 * 2);
  CHECK(red.instance.k == 3 + 2 * 3 * 2);
  CHECK(red.instance.tau == 2 * 3 + 1);
  for (const double v : red.instance.values) CHECK(v == 1.0);
  CHECK(red.sigma.is_permutation());
  check_instance(red.instance);

  // json round trip
  const Instance back = instance_from_json(instance_to_json(red.instance));
  CHECK(back.matrix == red.instance.matrix);

  CHECK_THROWS_AS(reduce_hitting_set({3, {{0}}, 1}), std::invalid_argument);
  CHECK_THROWS_AS(reduce_hitting_set({3, {{0}}, 3}), std::invalid_argument);
}

TEST_CASE("hitting-set yes/no instances map to full/partial sensing") {
  // yes: {a, b} hits both sets
  CHECK(esg_senses_everything(reduce_hitting_set({3, {{0}, {1}}, 2})));
  // no: three disjoint singletons cannot be hit by two elements
  const auto no = reduce_hitting_set({3, {{0}, {1}, {2}}, 2});
  CHECK(best_red_dp(no.instance, no.sigma).value >= 1.0 - 1e-9);
  // single-round instances are yes whenever the set is non-empty
  CHECK(esg_senses_everything(reduce_hitting_set({4, {{2}}, 2})));
}

TEST_CASE("hitting-set verdicts agree with the decider on random toys") {
  SplitMix64 rng(20240);
  for (int trial = 0; trial < 8; ++trial) {
    const int u = 3 + static_cast<int>(rng.next_below(2));
    const int m = 1 + static_cast<int>(rng.next_below(3));
    const int t = 2 + static_cast<int>(rng.next_below(static_cast<uint64_t>(u - 2)));
    HittingSetProblem p{u, {}, t};
    for (int s = 0; s < m; ++s) {
      std::vector<int> set;
      for (int e = 0; e < u; ++e)
        if (rng.next_below(3) == 0) set.push_back(e);
      p.sets.push_back(std::move(set));
    }
    const bool expected = hitting_set_bruteforce(p);
    const auto red = reduce_hitting_set(p);
    CHECK(esg_senses_everything(red) == expected);
  }
}

TEST_CASE("restricted formula validation") {
  // (x or x or y), (x or y or !y), (!x or !x or !x): proper counts
  R3SatFormula ok{2, {{1, 1, 2}, {1, 2, -2}, {-1, -1, -1}}};
  CHECK_NOTHROW(validate_r3sat(ok));

  R3SatFormula missing_neg{1, {{1, 1, 1}, {1, 1, 1}}};
  CHECK_THROWS_AS(validate_r3sat(missing_neg), std::invalid_argument);

  R3SatFormula out_of_range{1, {{1, 1, 2}, {1, 1, 1}, {-1, -1, -1}}};
  CHECK_THROWS_AS(validate_r3sat(out_of_range), std::invalid_argument);
}

TEST_CASE("restricted 3-sat decider") {
  CHECK(r3sat_bruteforce({1, {{1, 1, 1}, {1, 1, -1}}}));
  CHECK_FALSE(r3sat_bruteforce({1, {{1, 1, 1}, {1, 1, 1}, {-1, -1, -1}}}));
  CHECK(r3sat_bruteforce({2, {{1, 1, 2}, {1, 2, -2}, {-1, -1, -1}}}));
}

TEST_CASE("r3sat construction shape") {
  const R3SatFormula f{1, {{1, 1, 1}, {1, 1, -1}}};
  const auto red = reduce_restricted_3sat(f);
  // per variable 7 targets and 8 sensors, per clause one of each
  CHECK(red.instance.n == 2 + 7);
  CHECK(red.instance.k == 2 + 8);
  CHECK(red.instance.tau == kInfiniteTau);
  CHECK(red.threshold == 2 + 2);
  check_instance(red.instance);
  for (const double v : red.instance.values) CHECK(v == 1.0);
}

TEST_CASE("satisfiable one-variable formula reaches the threshold") {
  const R3SatFormula f{1, {{1, 1, 1}, {1, 1, -1}}};
  REQUIRE(r3sat_bruteforce(f));
  const auto red = reduce_restricted_3sat(f);
  // n = 9 keeps the factorial reference applicable; the one-shot search
  // must agree with it on the constructed instance
  const double brute = best_blue_bruteforce(red.instance).value;
  const double fast = best_blue_single_use(red.instance).value;
  CHECK(brute == doctest::Approx(fast));
  CHECK(brute >= red.threshold - 1e-9);
}

TEST_CASE("unsatisfiable one-variable formula stays below the threshold") {
  const R3SatFormula f{1, {{1, 1, 1}, {1, 1, 1}, {-1, -1, -1}}};
  REQUIRE_FALSE(r3sat_bruteforce(f));
  const auto red = reduce_restricted_3sat(f);
  const double brute = best_blue_bruteforce(red.instance).value;
  const double fast = best_blue_single_use(red.instance).value;
  CHECK(brute == doctest::Approx(fast));
  CHECK(brute < red.threshold - 1e-9);
}

TEST_CASE("two-variable formulas through the one-shot search") {
  const R3SatFormula sat{2, {{1, 1, 2}, {1, 2, -2}, {-1, -1, -1}}};
  REQUIRE(r3sat_bruteforce(sat));
  const auto sat_red = reduce_restricted_3sat(sat);
  CHECK(best_blue_single_use(sat_red.instance).value >= sat_red.threshold - 1e-9);

  const R3SatFormula unsat{2, {{1, 1, 1}, {-1, 2, 2}, {-2, -2, -2}, {1, 1, 2}}};
  REQUIRE_FALSE(r3sat_bruteforce(unsat));
  const auto unsat_red = reduce_restricted_3sat(unsat);
  CHECK(best_blue_single_use(unsat_red.instance).value < unsat_red.threshold - 1e-9);
}

TEST_CASE("the verdict does not depend on the open group-internal order") {
  const R3SatFormula sat{1, {{1, 1, 1}, {1, 1, -1}}};
  const R3SatFormula unsat{1, {{1, 1, 1}, {1, 1, 1}, {-1, -1, -1}}};
  for (const auto* f : {&sat, &unsat}) {
    const auto a = reduce_restricted_3sat(*f, 0);
    const auto b = reduce_restricted_3sat(*f, 1);
    const double va = best_blue_single_use(a.instance).value;
    const double vb = best_blue_single_use(b.instance).value;
    CHECK((va >= a.threshold - 1e-9) == (vb >= b.threshold - 1e-9));
  }
}
