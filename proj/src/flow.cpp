#include "scg/flow.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "scg/error.hpp"

namespace scg {

FlowNetwork::FlowNetwork(int num_nodes)
    : adjacency_(num_nodes), level_(num_nodes), cursor_(num_nodes) {}

int FlowNetwork::add_edge(int from, int to, std::int64_t capacity) {
  const int forward_index = static_cast<int>(adjacency_[from].size());
  const int backward_index =
      static_cast<int>(adjacency_[to].size()) + (from == to ? 1 : 0);
  adjacency_[from].push_back({to, backward_index, capacity, capacity});
  adjacency_[to].push_back({from, forward_index, 0, 0});
  edge_refs_.emplace_back(from, forward_index);
  return static_cast<int>(edge_refs_.size()) - 1;
}

std::int64_t FlowNetwork::flow(int edge_id) const {
  const auto [node, index] = edge_refs_[edge_id];
  const Arc& arc = adjacency_[node][index];
  return arc.initial_capacity - arc.capacity;
}

bool FlowNetwork::build_levels(int source, int sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> frontier;
  level_[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const int node = frontier.front();
    frontier.pop();
    for (const Arc& arc : adjacency_[node]) {
      if (arc.capacity > 0 && level_[arc.to] < 0) {
        level_[arc.to] = level_[node] + 1;
        frontier.push(arc.to);
      }
    }
  }
  return level_[sink] >= 0;
}

std::int64_t FlowNetwork::push(int node, int sink, std::int64_t limit) {
  if (node == sink) return limit;
  for (std::size_t& i = cursor_[node]; i < adjacency_[node].size(); ++i) {
    Arc& arc = adjacency_[node][i];
    if (arc.capacity <= 0 || level_[arc.to] != level_[node] + 1) continue;
    const std::int64_t pushed = push(arc.to, sink, std::min(limit, arc.capacity));
    if (pushed > 0) {
      arc.capacity -= pushed;
      adjacency_[arc.to][arc.reverse].capacity += pushed;
      return pushed;
    }
  }
  return 0;
}

std::int64_t FlowNetwork::max_flow(int source, int sink) {
  std::int64_t total = 0;
  while (build_levels(source, sink)) {
    std::fill(cursor_.begin(), cursor_.end(), 0);
    while (std::int64_t pushed =
               push(source, sink, std::numeric_limits<std::int64_t>::max())) {
      total += pushed;
    }
  }
  return total;
}

std::optional<ActionProfile> assign_with_demands(
    int num_agents, int num_resources,
    std::span<const std::pair<int, int>> edges, const Configuration& demand) {
  // Nodes: source, agents, resources, sink.
  const int source = 0;
  const int sink = num_agents + num_resources + 1;
  FlowNetwork network(num_agents + num_resources + 2);
  for (int i = 0; i < num_agents; ++i) network.add_edge(source, 1 + i, 1);
  std::vector<int> edge_ids;
  edge_ids.reserve(edges.size());
  for (const auto& [agent, resource] : edges) {
    edge_ids.push_back(network.add_edge(1 + agent, 1 + num_agents + resource, 1));
  }
  for (int r = 0; r < num_resources; ++r) {
    network.add_edge(1 + num_agents + r, sink, demand[r]);
  }
  if (network.max_flow(source, sink) < num_agents) return std::nullopt;

  ActionProfile profile(num_agents, -1);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (network.flow(edge_ids[k]) > 0) profile[edges[k].first] = edges[k].second;
  }
  return profile;
}

namespace {

template <typename T>
T validation_tolerance() {
  if constexpr (ScalarTraits<T>::kExact) {
    return T(0);
  } else {
    return 1e-7;
  }
}

template <typename T>
bool exceeds(const T& deviation, const T& tolerance) {
  return deviation > tolerance || -deviation > tolerance;
}

template <typename T>
void validate_flow(const BipartiteFlowProblem<T>& problem) {
  const int n = problem.num_agents;
  const int r_count = problem.num_resources;
  if (static_cast<int>(problem.demand.size()) != r_count ||
      static_cast<int>(problem.flow.size()) != n * r_count) {
    throw Error(ErrorKind::kDimensionMismatch, "flow problem dimensions");
  }
  int total_demand = 0;
  for (int d : problem.demand) {
    if (d < 0) throw Error(ErrorKind::kInfeasibleMarginals, "negative demand");
    total_demand += d;
  }
  if (total_demand != n) {
    throw Error(ErrorKind::kInfeasibleMarginals,
                "demands sum to " + std::to_string(total_demand) +
                    " but there are " + std::to_string(n) + " agents");
  }
  const T tol = validation_tolerance<T>();
  for (int i = 0; i < n; ++i) {
    T row = 0;
    for (int r = 0; r < r_count; ++r) {
      if (problem.at(i, r) < -tol) {
        throw Error(ErrorKind::kInfeasibleMarginals,
                    "negative flow on edge (" + std::to_string(i) + "," +
                        std::to_string(r) + ")");
      }
      row += problem.at(i, r);
    }
    if (exceeds(T(row - 1), tol)) {
      throw Error(ErrorKind::kInfeasibleMarginals,
                  "agent " + std::to_string(i) + " supplies " +
                      format_double(to_double(row)) + " instead of 1");
    }
  }
  for (int r = 0; r < r_count; ++r) {
    T column = 0;
    for (int i = 0; i < n; ++i) column += problem.at(i, r);
    if (exceeds(T(column - problem.demand[r]), tol)) {
      throw Error(ErrorKind::kInfeasibleMarginals,
                  "resource " + std::to_string(r) + " receives " +
                      format_double(to_double(column)) + " instead of " +
                      std::to_string(problem.demand[r]));
    }
  }
}

}  // namespace

template <typename T>
FlowDecomposition<T> decompose_fractional_flow(BipartiteFlowProblem<T> problem) {
  constexpr bool kExact = ScalarTraits<T>::kExact;
  validate_flow(problem);

  const int n = problem.num_agents;
  const int r_count = problem.num_resources;
  const int round_bound = n * r_count + n + r_count;
  if constexpr (!kExact) {
    for (T& value : problem.flow) {
      if (value < kFlowClampTolerance) value = 0;
    }
  }

  FlowDecomposition<T> result;
  T remaining = 1;
  std::vector<std::pair<int, int>> support;
  while (true) {
    if constexpr (kExact) {
      if (remaining == 0) break;
    } else {
      if (remaining <= kFloatTolerance) break;
    }
    support.clear();
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < r_count; ++r) {
        if (problem.at(i, r) > 0) support.emplace_back(i, r);
      }
    }
    std::optional<ActionProfile> assignment =
        assign_with_demands(n, r_count, support, problem.demand);
    if (!assignment) {
      // Float residue at the noise floor no longer carries a perfect
      // assignment; the weights are renormalized below.
      if constexpr (!kExact) {
        if (remaining <= 1e-6) break;
      }
      throw Error(ErrorKind::kInfeasibleMarginals,
                  "no integer assignment on the positive-flow support after " +
                      std::to_string(result.rounds) + " rounds");
    }
    int argmin = 0;
    for (int i = 1; i < n; ++i) {
      if (problem.at(i, (*assignment)[i]) < problem.at(argmin, (*assignment)[argmin])) {
        argmin = i;
      }
    }
    T weight = n > 0 ? problem.at(argmin, (*assignment)[argmin]) : remaining;
    if constexpr (!kExact) weight = std::min(weight, remaining);
    for (int i = 0; i < n; ++i) {
      T& edge = problem.at(i, (*assignment)[i]);
      edge -= weight;
      if constexpr (!kExact) {
        if (edge < kFlowClampTolerance) edge = 0;
      }
    }
    if (n > 0) problem.at(argmin, (*assignment)[argmin]) = 0;
    remaining -= weight;
    result.assignments.push_back(std::move(*assignment));
    result.weights.push_back(weight);
    ++result.rounds;
    if (result.rounds > round_bound) {
      throw Error(ErrorKind::kNumericalFailure,
                  "flow decomposition exceeded " + std::to_string(round_bound) +
                      " rounds");
    }
    if (n == 0) break;
  }

  if constexpr (!kExact) {
    const T total = std::accumulate(result.weights.begin(), result.weights.end(), T(0));
    for (T& w : result.weights) w /= total;
  }
  return result;
}

template FlowDecomposition<Rational> decompose_fractional_flow(
    BipartiteFlowProblem<Rational>);
template FlowDecomposition<double> decompose_fractional_flow(
    BipartiteFlowProblem<double>);

}  // namespace scg
