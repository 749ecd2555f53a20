#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "scg/equilibrium.hpp"
#include "scg/error.hpp"
#include "scg/instances.hpp"

using namespace scg;
using namespace scg::testing;

namespace {

CostTable<Rational> at_posterior(const Instance& inst, Rational p1) {
  const std::vector<Rational> p{p1, 1 - p1};
  return expected_cost_functions<Rational>(inst, p);
}

}  // namespace

TEST_CASE("signature labels on the table1 fixture") {
  const Instance d = table1();
  const auto c = at_posterior(d, Rational(6, 10));
  const Signature sig = signature_of(c, {2, 1});
  CHECK(sig.label(0, 1) == Label::kLE);
  CHECK(sig.label(1, 0) == Label::kLE);
  CHECK(sig.label_count() == 2);

  const Signature theta2 = signature_of(at_posterior(d, Rational(0)), {2, 1});
  CHECK(theta2.label(1, 0) == Label::kGT);
}

TEST_CASE("ties and balanced identical resources label LE") {
  const Instance inst = make_instance(4, {{{1, 2, 3, 4}, {1, 2, 3, 4}}}, {Rational(1)});
  const Signature sig = signature_of(state_cost_table<Rational>(inst, 0), {2, 2});
  CHECK(sig.label(0, 1) == Label::kLE);
  CHECK(sig.label(1, 0) == Label::kLE);

  const Instance flat = make_instance(3, {{{5, 5, 5}, {5, 5, 5}, {5, 5, 5}}}, {Rational(1)});
  const Signature all = signature_of(state_cost_table<Rational>(flat, 0), {1, 1, 1});
  for (int r = 0; r < 3; ++r) {
    for (int s = 0; s < 3; ++s) {
      if (r != s) CHECK(all.label(r, s) == Label::kLE);
    }
  }
}

TEST_CASE("obeying assignments") {
  const Instance t = t1();
  const Signature sig = signature_of(state_cost_table<Rational>(t, 0), {1, 1});
  const auto a = find_obeying_assignment(t, sig);
  REQUIRE(a.has_value());
  CHECK(config_of_profile(t, *a) == Configuration{1, 1});

  const Instance forced = make_instance(2, {{{1, 2}, {1, 2}}}, {Rational(1)}, {{0}, {0}});
  CHECK_FALSE(find_obeying_assignment(forced, Signature({1, 1})).has_value());

  const Instance d = table1();
  const auto c1 = at_posterior(d, Rational(1));
  const auto profile = find_obeying_assignment(d, signature_of(c1, {2, 1}));
  REQUIRE(profile.has_value());
  CHECK(config_of_profile(d, *profile) == Configuration{2, 1});
}

TEST_CASE("is_pure_ne") {
  const Instance d = table1();
  CHECK(is_pure_ne(d, at_posterior(d, Rational(1)), {0, 0, 1}));
  CHECK_FALSE(is_pure_ne(d, at_posterior(d, Rational(0)), {0, 0, 1}));
  CHECK_FALSE(is_pure_ne(t1(), state_cost_table<Rational>(t1(), 0), {0, 0}));
  CHECK(is_pure_ne(t1(), state_cost_table<Rational>(t1(), 0), {0, 1}));
}

TEST_CASE("best and worst NE on the table1 fixture are exact") {
  const Instance d = table1();
  const auto b1 = best_nash(d, at_posterior(d, Rational(1)));
  CHECK(b1.cost == 11);
  CHECK(b1.config == Configuration{2, 1});
  const auto b2 = best_nash(d, at_posterior(d, Rational(0)));
  CHECK(b2.cost == 12);
  CHECK(b2.config == Configuration{3, 0});
  CHECK(best_nash(d, at_posterior(d, Rational(6, 10))).cost == Rational(47, 5));
  const auto b4 = best_nash(d, at_posterior(d, Rational(4, 10)));
  CHECK(b4.cost == Rational(96, 5));
  CHECK(b4.config == Configuration{3, 0});

  for (Rational p : {Rational(0), Rational(1, 3), Rational(1, 2), Rational(1)}) {
    const auto c = at_posterior(d, p);
    const auto best = best_nash(d, c);
    const auto worst = worst_nash(d, c);
    CHECK(best.cost <= worst.cost);
    CHECK(is_pure_ne(d, c, best.assignment));
    CHECK(is_pure_ne(d, c, worst.assignment));
  }
}

TEST_CASE("signature and matching find exactly the brute-force NE set") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const bool asymmetric = seed % 2 == 0;
    const int n = 2 + static_cast<int>(seed % 4);
    const Instance inst = gen_random({n, 3, 1, seed, asymmetric});
    const auto c = state_cost_table<Rational>(inst, 0);
    std::set<Configuration> via_signatures;
    for (const auto& result : nash_configurations(inst, c)) {
      CHECK(is_pure_ne(inst, c, result.assignment));
      CHECK(config_of_profile(inst, result.assignment) == result.config);
      via_signatures.insert(result.config);
    }
    CHECK(via_signatures == brute_force_ne(inst, c));
  }
}

TEST_CASE("potential minimizer is an equilibrium configuration") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = gen_random({4, 3, 2, seed, seed % 3 == 0});
    const std::vector<Rational> mu = inst.prior_vector();
    const auto c = expected_cost_functions<Rational>(inst, mu);
    const auto configs = enumerate_configurations(inst);
    Configuration argmin = configs.front();
    for (const auto& n : configs) {
      if (potential(c, n) < potential(c, argmin)) argmin = n;
    }
    const auto a = find_obeying_assignment(inst, signature_of(c, argmin));
    REQUIRE(a.has_value());
    CHECK(is_pure_ne(inst, c, *a));
  }
}

TEST_CASE("best-response dynamics") {
  const auto t = state_cost_table<Rational>(t1(), 0);
  CHECK(best_response_dynamics(t1(), t, {0, 1}).profile == ActionProfile{0, 1});
  const auto moved = best_response_dynamics(t1(), t, {0, 0});
  CHECK(config_of_profile(t1(), moved.profile) == Configuration{1, 1});

  const Instance d = table1();
  const auto c1 = at_posterior(d, Rational(1));
  const auto run = best_response_dynamics(d, c1, {1, 1, 1});
  CHECK(is_pure_ne(d, c1, run.profile));
  CHECK(social_cost(c1, config_of_profile(d, run.profile)) == 11);

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = gen_random({5, 3, 1, seed, true});
    const auto c = state_cost_table<Rational>(inst, 0);
    ActionProfile start;
    for (int i = 0; i < inst.num_agents(); ++i) start.push_back(inst.action_set(i).back());
    const auto r = best_response_dynamics(inst, c, start);
    CHECK(is_pure_ne(inst, c, r.profile));
    for (std::size_t k = 1; k < r.potentials.size(); ++k) {
      CHECK(r.potentials[k] < r.potentials[k - 1]);
    }
  }
  CHECK_THROWS_AS(best_response_dynamics(t1(), t, {0, 0}, 0), Error);
}
