#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "scg/rational.hpp"
#include "scg/types.hpp"

namespace scg {

// Integer max-flow (Dinic). Edges are explored in insertion order, so the
// returned flow is deterministic for a fixed construction sequence.
class FlowNetwork {
 public:
  explicit FlowNetwork(int num_nodes);

  // Returns an edge id usable with flow().
  int add_edge(int from, int to, std::int64_t capacity);

  std::int64_t max_flow(int source, int sink);

  std::int64_t flow(int edge_id) const;
  int num_nodes() const { return static_cast<int>(adjacency_.size()); }

 private:
  struct Arc {
    int to;
    int reverse;  // index into adjacency_[to]
    std::int64_t capacity;
    std::int64_t initial_capacity;
  };

  bool build_levels(int source, int sink);
  std::int64_t push(int node, int sink, std::int64_t limit);

  std::vector<std::vector<Arc>> adjacency_;
  std::vector<std::pair<int, int>> edge_refs_;  // (node, index) per edge id
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

// One-to-many bipartite assignment: every agent matched along an allowed
// (agent, resource) edge, resource r receiving exactly demand[r] agents.
// Returns nullopt when max-flow < number of agents.
std::optional<ActionProfile> assign_with_demands(
    int num_agents, int num_resources,
    std::span<const std::pair<int, int>> edges, const Configuration& demand);

// Fractional flow f(i -> r) on the agent/resource bipartite graph with unit
// supply per agent and demand n_r per resource. Row-major N x R.
template <typename T>
struct BipartiteFlowProblem {
  int num_agents = 0;
  int num_resources = 0;
  Configuration demand;
  std::vector<T> flow;

  T& at(int agent, int resource) { return flow[agent * num_resources + resource]; }
  const T& at(int agent, int resource) const {
    return flow[agent * num_resources + resource];
  }
};

template <typename T>
struct FlowDecomposition {
  std::vector<ActionProfile> assignments;
  std::vector<T> weights;
  int rounds = 0;
};

// Splits a fractional flow into a distribution over integer flows, each an
// action profile realizing the demand exactly. Each round finds an integer
// max-flow on the positive-flow support, takes weight min_e f(e), and zeroes
// at least one edge, so rounds <= N*R + N + R.
// Throws kInfeasibleMarginals when the input violates supply/demand.
template <typename T>
FlowDecomposition<T> decompose_fractional_flow(BipartiteFlowProblem<T> problem);

// Residual below this is treated as zero during float decomposition.
inline constexpr double kFlowClampTolerance = 1e-12;

extern template FlowDecomposition<Rational> decompose_fractional_flow(
    BipartiteFlowProblem<Rational>);
extern template FlowDecomposition<double> decompose_fractional_flow(
    BipartiteFlowProblem<double>);

}  // namespace scg
