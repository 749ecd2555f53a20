#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "fixtures.hpp"
#include "scg/equilibrium.hpp"
#include "scg/error.hpp"
#include "scg/instances.hpp"
#include "scg/private_signaling.hpp"
#include "scg/public_signaling.hpp"

using namespace scg;
using namespace scg::testing;

namespace {

using Cell = std::tuple<int, Configuration, int, int>;  // state, n, agent, resource

std::map<Cell, double> cells_of(const ReducedForm& x) {
  std::map<Cell, double> out;
  for (const auto& e : x.entries) {
    out[{e.state, x.configurations[e.config], e.agent, e.resource}] += e.value;
  }
  return out;
}

double max_cell_gap(const ReducedForm& a, const ReducedForm& b) {
  auto ca = cells_of(a);
  auto cb = cells_of(b);
  double gap = 0;
  for (const auto& [k, v] : ca) gap = std::max(gap, std::abs(v - cb[k]));
  for (const auto& [k, v] : cb) gap = std::max(gap, std::abs(v - ca[k]));
  return gap;
}

// A few random profiles per state with random weights.
ExplicitScheme random_scheme(const Instance& inst, std::mt19937_64& rng) {
  const auto profiles = all_profiles(inst);
  std::map<std::pair<int, ActionProfile>, double> merged;
  for (int s = 0; s < inst.num_states(); ++s) {
    const int support = 1 + static_cast<int>(rng() % 4);
    std::vector<double> w(support);
    double total = 0;
    for (double& v : w) total += (v = 1.0 + static_cast<double>(rng() % 9));
    for (int k = 0; k < support; ++k) {
      merged[{s, profiles[rng() % profiles.size()]}] += w[k] / total;
    }
  }
  ExplicitScheme scheme;
  for (const auto& [key, p] : merged) scheme.entries.push_back({key.first, key.second, p});
  return scheme;
}

// Reveals the state and plays the best NE of that state.
ExplicitScheme full_revelation(const Instance& inst) {
  ExplicitScheme scheme;
  for (int s = 0; s < inst.num_states(); ++s) {
    const auto ne = best_nash<Rational>(inst, state_cost_table<Rational>(inst, s));
    scheme.entries.push_back({s, ne.assignment, 1.0});
  }
  return scheme;
}

bool has_violation(const Report& report, const std::string& constraint) {
  for (const auto& v : report.violations) {
    if (v.constraint == constraint) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("single-resource instance is forced") {
  const Instance inst = make_instance(3, {{{1, 2, 4}}, {{2, 3, 7}}}, {Rational(1, 4), Rational(3, 4)});
  const auto sol = solve_optimal_private(inst);
  CHECK(sol.value == doctest::Approx(3 * (0.25 * 4 + 0.75 * 7)));
  for (const auto& e : sol.reduced.entries) {
    CHECK(sol.reduced.configurations[e.config] == Configuration{3});
  }
  CHECK(solve_bce_exponential(inst).value == doctest::Approx(sol.value));
  const Instance one = make_instance(3, {{{1, 2, 4}}}, {Rational(1)});
  CHECK(solve_optimal_ce(one).value == doctest::Approx(12));
}

TEST_CASE("table1 private optimum matches the exponential program") {
  const Instance d = table1();
  const auto sol = solve_optimal_private(d);
  const auto bce = solve_bce_exponential(d);
  CHECK(std::abs(sol.value - bce.value) <= 1e-6);
  CHECK(check_reduced_feasibility(d, sol.reduced).ok());
  CHECK(check_obedience(d, bce.scheme).ok());
  CHECK(sol.value <= solve_optimal_public(d).value + 1e-7);
}

TEST_CASE("single-state correlated equilibria") {
  const auto t = solve_bce_exponential(t1());
  CHECK(t.value == doctest::Approx(2));
  CHECK(solve_optimal_ce(t1()).value == doctest::Approx(2));
  const Instance theta1 = make_instance(3, {{{1, 1, 10}, {9, 10, 10}}}, {Rational(1)});
  CHECK(solve_bce_exponential(theta1).value <= 11 + 1e-9);
  CHECK(solve_optimal_ce(theta1).value <= 11 + 1e-9);
  CHECK_THROWS_AS(solve_optimal_ce(table1()), Error);
}

TEST_CASE("private optimum matches the exponential program on random instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = gen_random({2 + static_cast<int>(seed % 3), 2 + static_cast<int>(seed % 2),
                                      1 + static_cast<int>(seed % 2), seed, seed % 3 == 0});
    const auto sol = solve_optimal_private(inst);
    const auto bce = solve_bce_exponential(inst);
    CHECK(std::abs(sol.value - bce.value) <= 1e-6);
    CHECK(check_reduced_feasibility(inst, sol.reduced).ok());
    for (const auto& e : sol.reduced.entries) {
      CHECK(sol.reduced.configurations[e.config][e.resource] > 0);
    }
  }
}

TEST_CASE("induced reduced form of simple schemes") {
  const Instance t = t1();
  ExplicitScheme deterministic{{{0, {0, 1}, 1.0}}};
  const auto x = induced_reduced_form(t, deterministic);
  const auto cells = cells_of(x);
  CHECK(cells.size() == 2);
  CHECK(cells.at({0, {1, 1}, 0, 0}) == 1.0);
  CHECK(cells.at({0, {1, 1}, 1, 1}) == 1.0);

  ExplicitScheme uniform{{{0, {0, 1}, 0.5}, {0, {1, 0}, 0.5}}};
  const auto u = cells_of(induced_reduced_form(t, uniform));
  CHECK(u.size() == 4);
  for (const auto& [k, v] : u) CHECK(v == 0.5);
}

TEST_CASE("feasibility report names the broken constraint") {
  const Instance t = t1();
  ExplicitScheme uniform{{{0, {0, 1}, 0.5}, {0, {1, 0}, 0.5}}};
  auto x = induced_reduced_form(t, uniform);
  CHECK(check_reduced_feasibility(t, x).ok());

  SUBCASE("agent mass 0.9") {
    for (auto& e : x.entries) {
      if (e.agent == 0 && e.resource == 0) e.value = 0.4;
    }
    const auto report = check_reduced_feasibility(t, x);
    REQUIRE(has_violation(report, "agent-mass"));
    for (const auto& v : report.violations) {
      if (v.constraint == "agent-mass") CHECK(v.residual == doctest::Approx(0.1));
    }
  }
  SUBCASE("unequal configuration probability across agents") {
    x.configurations.push_back({2, 0});
    const int c = static_cast<int>(x.configurations.size()) - 1;
    for (auto& e : x.entries) {
      if (e.agent == 0 && e.resource == 0) e.value = 0.25;
    }
    x.entries.push_back({0, c, 0, 0, 0.25});
    CHECK(has_violation(check_reduced_feasibility(t, x), "coupling"));
  }
  SUBCASE("negative cell") {
    x.entries.push_back({0, 0, 0, 0, -0.5});
    CHECK(has_violation(check_reduced_feasibility(t, x), "sign"));
  }
}

TEST_CASE("obedience checks") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = gen_random({3, 3, 2, seed, seed % 2 == 0});
    CHECK(check_obedience(inst, full_revelation(inst)).ok());
  }
  ExplicitScheme bad{{{0, {0, 0}, 1.0}}};
  const auto report = check_obedience(t1(), bad);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().constraint == "obedience");
  CHECK(report.violations.front().residual == doctest::Approx(1.0));
}

TEST_CASE("explicit and reduced obedience terms coincide") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = gen_random({2 + static_cast<int>(rng() % 3), 2 + static_cast<int>(rng() % 2),
                                      1 + static_cast<int>(rng() % 3), rng(), rng() % 2 == 0});
    const auto scheme = random_scheme(inst, rng);
    const auto explicit_terms = obedience_terms(inst, scheme);
    const auto x = induced_reduced_form(inst, scheme);
    const auto reduced_terms = obedience_terms(inst, x);
    REQUIRE(explicit_terms.size() == reduced_terms.size());
    for (std::size_t k = 0; k < explicit_terms.size(); ++k) {
      CHECK(explicit_terms[k].agent == reduced_terms[k].agent);
      CHECK(std::abs(explicit_terms[k].value - reduced_terms[k].value) <= 1e-9);
    }
    CHECK(std::abs(explicit_cost(inst, scheme) - reduced_cost(inst, x)) <= 1e-9);
    CHECK(check_reduced_feasibility(inst, x).ok());
    const auto round_trip = explicit_from_reduced(inst, x);
    CHECK(max_cell_gap(induced_reduced_form(inst, round_trip), x) <= 1e-9);
  }
}

TEST_CASE("the decomposition pipeline closes on solver output") {
  const Instance d = table1();
  const auto sol = solve_optimal_private(d);
  ConversionStats stats;
  const auto scheme = explicit_from_reduced(d, sol.reduced, {}, &stats);
  CHECK(check_obedience(d, scheme).ok());
  CHECK(std::abs(explicit_cost(d, scheme) - sol.value) <= 1e-7);
  CHECK(max_cell_gap(induced_reduced_form(d, scheme), sol.reduced) <= 1e-7);
  CHECK(stats.max_rounds <= 3 * 2 + 3 + 2);
  CHECK_NOTHROW(validate_explicit_scheme(d, scheme));

  const auto full = full_revelation(d);
  const auto back = explicit_from_reduced(d, induced_reduced_form(d, full));
  CHECK(max_cell_gap(induced_reduced_form(d, back), induced_reduced_form(d, full)) <= 1e-12);
}

TEST_CASE("sampling") {
  const Instance t = t1();
  std::mt19937_64 rng(1);
  ExplicitScheme deterministic{{{0, {0, 1}, 1.0}}};
  const auto x = induced_reduced_form(t, deterministic);
  for (int k = 0; k < 100; ++k) CHECK(sample_private(t, x, 0, rng) == ActionProfile{0, 1});

  ExplicitScheme uniform{{{0, {0, 1}, 0.5}, {0, {1, 0}, 0.5}}};
  PrivateSampler sampler(t, induced_reduced_form(t, uniform));
  int first = 0;
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) first += sampler.sample(0, rng) == ActionProfile{0, 1};
  CHECK(std::abs(first - draws / 2) <= 3 * std::sqrt(draws * 0.25));

  std::mt19937_64 a(99), b(99);
  PrivateSampler sa(t, induced_reduced_form(t, uniform)), sb(t, induced_reduced_form(t, uniform));
  for (int k = 0; k < 50; ++k) CHECK(sa.sample(0, a) == sb.sample(0, b));
}

TEST_CASE("empirical marginals of the optimal table1 scheme") {
  const Instance d = table1();
  const auto sol = solve_optimal_private(d);
  PrivateSampler sampler(d, sol.reduced);
  std::mt19937_64 rng(2024);
  const int draws = 100000;
  for (int s = 0; s < 2; ++s) {
    std::map<Cell, int> counts;
    for (int k = 0; k < draws; ++k) {
      const auto a = sampler.sample(s, rng);
      const auto n = config_of_profile(d, a);
      for (int i = 0; i < 3; ++i) ++counts[{s, n, i, a[i]}];
    }
    auto expected = cells_of(sol.reduced);
    for (const auto& [cell, c] : counts) CHECK(expected.count(cell) == 1);
    for (const auto& [cell, p] : expected) {
      if (std::get<0>(cell) != s) continue;
      const double sigma = std::sqrt(std::max(0.0, p * (1 - p)) / draws);
      CHECK(std::abs(counts[cell] / double(draws) - p) <= 3 * sigma + 1e-12);
    }
  }
}

TEST_CASE("figure1 private scheme") {
  const Instance f = gen_figure1(5, Rational(1, 100));
  const auto partial = figure1_partial_reveal_scheme(f);
  CHECK(check_obedience(f, partial).ok());
  CHECK(explicit_cost(f, partial) == doctest::Approx(1.01));
  CHECK(solve_optimal_private(f).value <= 1.01 + 1e-7);
}

TEST_CASE("private never beats public from above") {
  for (std::uint64_t seed = 50; seed < 62; ++seed) {
    const Instance inst = gen_random({3, 3, 2, seed, seed % 2 == 0});
    const double priv = solve_optimal_private(inst).value;
    const double pub = solve_optimal_public(inst).value;
    const double full = evaluate_public_scheme(inst, full_info_scheme(inst), Selection::kBest);
    const double none = evaluate_public_scheme(inst, no_info_scheme(inst), Selection::kBest);
    CHECK(priv <= pub + 1e-7);
    CHECK(pub <= std::min(full, none) + 1e-7);
  }
}

TEST_CASE("size guards") {
  SolveOptions options;
  options.limits.explicit_cells = 10;
  CHECK_THROWS_AS(solve_bce_exponential(table1(), options), Error);
  options.limits.reduced_cells = 10;
  CHECK_THROWS_AS(solve_optimal_private(table1(), options), Error);
}
