#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scg/core.hpp"
#include "scg/private_signaling.hpp"
#include "scg/public_signaling.hpp"

namespace scg {

// Two resources, three agents, two states; the default prior is uniform.
Instance gen_table1(std::span<const Rational> prior = {});

// Three symmetric resources and two equally likely states. Resource 1 costs
// 0 below N agents and 1 at N in state 1 and a flat `wrong_state_cost` in
// state 2; resource 2 mirrors it; resource 3 costs 1 + eps in both states.
// Requires N >= 2, eps > 0, wrong_state_cost >= 2 (InvalidParams).
Instance gen_figure1(int num_agents, const Rational& eps,
                     const Rational& wrong_state_cost = Rational(2));

// Every state tells all agents but one (chosen uniformly) the cheap resource
// and sends the remaining agent to the constant-cost resource.
ExplicitScheme figure1_partial_reveal_scheme(const Instance& inst);

// Vertices are 0-based here; edge-list files use 1-based labels.
struct GraphSpec {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> color_classes;  // optional partial coloring
};

// Throws GraphInvariantViolated unless the graph is simple, every color
// class is an independent set of distinct vertices, classes are disjoint,
// and no vertex is adjacent to all others.
void validate_graph(const GraphSpec& graph);

// Lines: "u v" edges, optional "vertices R", optional "color k v1 v2 ...",
// '#' starts a comment. Throws ParseError with the line number.
GraphSpec parse_edge_list(std::string_view text);
GraphSpec read_graph(const std::string& path);

// Backup resource 0 plus one resource per vertex, one uniform state per
// vertex, N = (1 - eps) R / q agents. In state v: vertex v costs 1 - 1/n^2,
// neighbours of v cost 3, every other resource costs 1.
// Throws NonIntegerAgentCount or GraphInvariantViolated.
Instance gen_hardness(const GraphSpec& graph, int q, int k, const Rational& eps);

// Signal j for color class j (classes in order) and a final signal for
// uncolored states. Throws ClassSizeMismatch unless every class has exactly
// N vertices.
PublicScheme coloring_scheme(const Instance& inst, const GraphSpec& graph);

struct RandomInstanceParams {
  int num_agents = 3;
  int num_resources = 2;
  int num_states = 2;
  std::uint64_t seed = 1;
  bool asymmetric = false;
  int max_cost = 10;
};

// Costs: sorted integers in [0, max_cost]. Prior: a uniformly random
// composition of D = max(1000, |Theta|) into positive parts, over D.
// Asymmetric action sets are uniform non-empty subsets.
Instance gen_random(const RandomInstanceParams& params);

// Portable integer in [0, bound) by rejection sampling.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace scg
