#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <random>

#include "scg/error.hpp"
#include "scg/flow.hpp"

using namespace scg;

namespace {

template <typename T>
BipartiteFlowProblem<T> uniform_problem(int agents, Configuration demand) {
  BipartiteFlowProblem<T> p;
  p.num_agents = agents;
  p.num_resources = static_cast<int>(demand.size());
  for (int i = 0; i < agents; ++i) {
    for (int r = 0; r < p.num_resources; ++r) p.flow.push_back(T(demand[r]) / T(agents));
  }
  p.demand = std::move(demand);
  return p;
}

// Sum_k p_k [a_k(i) = r] per cell.
template <typename T>
std::vector<T> reconstruct(const FlowDecomposition<T>& d, int agents, int resources) {
  std::vector<T> out(static_cast<std::size_t>(agents) * resources, T(0));
  for (std::size_t k = 0; k < d.assignments.size(); ++k) {
    for (int i = 0; i < agents; ++i) out[i * resources + d.assignments[k][i]] += d.weights[k];
  }
  return out;
}

template <typename T>
void check_realizes_demand(const FlowDecomposition<T>& d, const Configuration& demand) {
  for (const auto& a : d.assignments) {
    Configuration n(demand.size(), 0);
    for (int r : a) ++n[r];
    CHECK(n == demand);
  }
}

// Random mixture of random demand-respecting assignments; the mixture is
// the ground truth the decomposition must reproduce.
BipartiteFlowProblem<Rational> random_mixture(std::mt19937_64& rng, int agents, int resources,
                                              int components) {
  Configuration demand(resources, 0);
  for (int i = 0; i < agents; ++i) ++demand[rng() % resources];
  std::vector<int> base;
  for (int r = 0; r < resources; ++r) base.insert(base.end(), demand[r], r);
  BipartiteFlowProblem<Rational> p;
  p.num_agents = agents;
  p.num_resources = resources;
  p.demand = demand;
  p.flow.assign(static_cast<std::size_t>(agents) * resources, Rational(0));
  std::vector<long> weights(components);
  long total = 0;
  for (auto& w : weights) total += (w = static_cast<long>(rng() % 9 + 1));
  for (int k = 0; k < components; ++k) {
    std::shuffle(base.begin(), base.end(), rng);
    for (int i = 0; i < agents; ++i) p.at(i, base[i]) += Rational(weights[k], total);
  }
  return p;
}

}  // namespace

TEST_CASE("max flow on small networks") {
  const std::vector<std::pair<int, int>> complete{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const auto a = assign_with_demands(2, 2, complete, {1, 1});
  REQUIRE(a.has_value());
  CHECK((*a)[0] != (*a)[1]);

  const std::vector<std::pair<int, int>> bottleneck{{0, 0}, {1, 0}};
  CHECK_FALSE(assign_with_demands(2, 2, bottleneck, {1, 1}).has_value());

  FlowNetwork net(4);
  net.add_edge(0, 1, 3);
  const int e = net.add_edge(0, 2, 2);
  net.add_edge(1, 3, 2);
  net.add_edge(2, 3, 3);
  net.add_edge(1, 2, 1);
  CHECK(net.max_flow(0, 3) == 5);
  CHECK(net.flow(e) == 2);
}

TEST_CASE("uniform 2x2 flow splits into the two matchings") {
  const auto d = decompose_fractional_flow(uniform_problem<Rational>(2, {1, 1}));
  REQUIRE(d.assignments.size() == 2);
  std::map<ActionProfile, Rational> got;
  for (std::size_t k = 0; k < 2; ++k) got[d.assignments[k]] = d.weights[k];
  CHECK(got[ActionProfile{0, 1}] == Rational(1, 2));
  CHECK(got[ActionProfile{1, 0}] == Rational(1, 2));
}

TEST_CASE("integral flow is returned as one assignment") {
  BipartiteFlowProblem<Rational> p;
  p.num_agents = 3;
  p.num_resources = 2;
  p.demand = {2, 1};
  p.flow = {Rational(1), Rational(0), Rational(0), Rational(1), Rational(1), Rational(0)};
  const auto d = decompose_fractional_flow(p);
  REQUIRE(d.assignments.size() == 1);
  CHECK(d.assignments[0] == ActionProfile{0, 1, 0});
  CHECK(d.weights[0] == 1);
}

TEST_CASE("three agents with demand (2,1) use each agent once on resource 2") {
  const auto d = decompose_fractional_flow(uniform_problem<Rational>(3, {2, 1}));
  REQUIRE(d.assignments.size() == 3);
  std::set<int> on_second;
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(d.weights[k] == Rational(1, 3));
    for (int i = 0; i < 3; ++i) {
      if (d.assignments[k][i] == 1) on_second.insert(i);
    }
  }
  CHECK(on_second.size() == 3);
}

TEST_CASE("exact reconstruction of random mixtures") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int agents = 2 + static_cast<int>(rng() % 6);
    const int resources = 2 + static_cast<int>(rng() % 3);
    const auto p = random_mixture(rng, agents, resources, 1 + static_cast<int>(rng() % 6));
    const auto d = decompose_fractional_flow(p);
    CHECK(reconstruct(d, agents, resources) == p.flow);
    check_realizes_demand(d, p.demand);
    Rational total = 0;
    for (const auto& w : d.weights) {
      CHECK(w > 0);
      total += w;
    }
    CHECK(total == 1);
    CHECK(d.rounds <= agents * resources + agents + resources);
  }
}

TEST_CASE("float decomposition matches within tolerance") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int agents = 2 + static_cast<int>(rng() % 7);
    const int resources = 2 + static_cast<int>(rng() % 3);
    const auto exact = random_mixture(rng, agents, resources, 1 + static_cast<int>(rng() % 8));
    BipartiteFlowProblem<double> p;
    p.num_agents = agents;
    p.num_resources = resources;
    p.demand = exact.demand;
    for (const auto& v : exact.flow) p.flow.push_back(to_double(v));
    const auto d = decompose_fractional_flow(p);
    const auto back = reconstruct(d, agents, resources);
    for (std::size_t c = 0; c < back.size(); ++c) CHECK(std::abs(back[c] - p.flow[c]) <= 1e-9);
    double total = 0;
    for (double w : d.weights) {
      CHECK(w > 0);
      total += w;
    }
    CHECK(std::abs(total - 1) <= 1e-12);
    CHECK(d.rounds <= agents * resources + agents + resources);
    check_realizes_demand(d, p.demand);
  }
}

TEST_CASE("two resources give fixed-size sampling with the requested inclusion probabilities") {
  // Inclusion probabilities pi_i summing to an integer k; resource 1 holds k agents.
  BipartiteFlowProblem<Rational> p;
  p.num_agents = 5;
  p.num_resources = 2;
  p.demand = {2, 3};
  const std::vector<Rational> pi{Rational(1, 5), Rational(3, 5), Rational(1, 2), Rational(2, 5),
                                 Rational(3, 10)};
  for (const auto& v : pi) {
    p.flow.push_back(v);
    p.flow.push_back(1 - v);
  }
  const auto d = decompose_fractional_flow(p);
  const auto back = reconstruct(d, 5, 2);
  for (int i = 0; i < 5; ++i) CHECK(back[i * 2] == pi[i]);
  check_realizes_demand(d, p.demand);
}

TEST_CASE("infeasible marginals are rejected") {
  auto p = uniform_problem<Rational>(2, {1, 1});
  p.at(0, 0) = Rational(9, 10);
  p.at(0, 1) = Rational(1, 10);
  try {
    decompose_fractional_flow(p);
    FAIL("expected InfeasibleMarginals");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInfeasibleMarginals);
  }
  auto q = uniform_problem<double>(2, {1, 1});
  q.at(1, 1) = 0.7;
  CHECK_THROWS_AS(decompose_fractional_flow(q), Error);
}
