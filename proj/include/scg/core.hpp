#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scg/rational.hpp"
#include "scg/types.hpp"

namespace scg {

struct RawState {
  std::string name;
  Rational prior;
  // costs[r][n - 1] = c_r(n) for n = 1..N.
  std::vector<std::vector<Rational>> costs;
};

// Unvalidated instance as read from a file or built by a generator.
struct RawInstance {
  std::string name;
  int num_agents = 0;
  std::vector<std::string> resources;
  std::vector<std::vector<int>> action_sets;
  std::vector<RawState> states;
};

// Validated game under state uncertainty. Only validate_instance builds one,
// so every Instance satisfies the model invariants.
class Instance {
 public:
  const std::string& name() const { return raw_.name; }
  int num_agents() const { return raw_.num_agents; }
  int num_resources() const { return static_cast<int>(raw_.resources.size()); }
  int num_states() const { return static_cast<int>(raw_.states.size()); }

  std::span<const int> action_set(int agent) const { return raw_.action_sets[agent]; }
  bool allows(int agent, int resource) const {
    return allowed_[agent * num_resources() + resource] != 0;
  }
  bool symmetric() const { return symmetric_; }

  const Rational& prior(int state) const { return raw_.states[state].prior; }
  std::vector<Rational> prior_vector() const;
  // n in 1..N.
  const Rational& cost(int state, int resource, int n) const {
    return raw_.states[state].costs[resource][n - 1];
  }
  double prior_value(int state) const { return prior_double_[state]; }
  double cost_value(int state, int resource, int n) const {
    return cost_double_[(state * num_resources() + resource) * num_agents() + n - 1];
  }
  template <typename T>
  T cost_as(int state, int resource, int n) const {
    if constexpr (ScalarTraits<T>::kExact) {
      return cost(state, resource, n);
    } else {
      return cost_value(state, resource, n);
    }
  }
  template <typename T>
  T prior_as(int state) const {
    if constexpr (ScalarTraits<T>::kExact) {
      return prior(state);
    } else {
      return prior_value(state);
    }
  }

  const std::string& state_name(int state) const { return raw_.states[state].name; }
  const std::string& resource_name(int resource) const { return raw_.resources[resource]; }
  int state_index(const std::string& state_name) const;  // -1 if absent
  int resource_index(const std::string& resource_name) const;

  // (agent, resource) pairs with resource in the agent's action set, in
  // agent-major order.
  const std::vector<std::pair<int, int>>& availability_edges() const { return edges_; }

  const RawInstance& raw() const { return raw_; }

 private:
  friend Instance validate_instance(RawInstance raw);
  Instance() = default;

  RawInstance raw_;
  std::vector<char> allowed_;
  bool symmetric_ = true;
  std::vector<double> prior_double_;
  std::vector<double> cost_double_;
  std::vector<std::pair<int, int>> edges_;
};

// Checks every model invariant; action sets are sorted and deduplicated.
// Throws PriorNotNormalized, CostNotMonotone, EmptyActionSet, NegativeCost,
// DimensionMismatch or InvalidAction naming the offending field.
Instance validate_instance(RawInstance raw);

// C_r(n) for n = 1..N.
template <typename T>
class CostTable {
 public:
  CostTable() = default;
  CostTable(int num_resources, int num_agents)
      : num_resources_(num_resources),
        num_agents_(num_agents),
        values_(static_cast<std::size_t>(num_resources) * num_agents, T(0)) {}

  int num_resources() const { return num_resources_; }
  int num_agents() const { return num_agents_; }

  const T& at(int resource, int n) const { return values_[resource * num_agents_ + n - 1]; }
  T& at(int resource, int n) { return values_[resource * num_agents_ + n - 1]; }

 private:
  int num_resources_ = 0;
  int num_agents_ = 0;
  std::vector<T> values_;
};

// C_r(n) = sum_theta p_theta c_r^theta(n). Throws DimensionMismatch when p
// has the wrong length.
template <typename T>
CostTable<T> expected_cost_functions(const Instance& inst, std::span<const T> posterior);

template <typename T>
CostTable<T> state_cost_table(const Instance& inst, int state);

// sum over occupied resources of n_r * C_r(n_r).
template <typename T>
T social_cost(const CostTable<T>& costs, const Configuration& n) {
  T total = 0;
  for (int r = 0; r < costs.num_resources(); ++r) {
    if (n[r] > 0) total += T(n[r]) * costs.at(r, n[r]);
  }
  return total;
}

// Rosenthal potential: sum_r sum_{j <= n_r} C_r(j).
template <typename T>
T potential(const CostTable<T>& costs, const Configuration& n) {
  T total = 0;
  for (int r = 0; r < costs.num_resources(); ++r) {
    for (int j = 1; j <= n[r]; ++j) total += costs.at(r, j);
  }
  return total;
}

// Number of compositions of N into R non-negative parts, as a double so the
// guard itself cannot overflow.
double count_compositions(int num_agents, int num_resources);

// True iff some assignment respecting action sets realizes n.
bool configuration_feasible(const Instance& inst, const Configuration& n);

// All feasible configurations in ascending lexicographic order. Throws
// SizeGuard when the number of compositions exceeds cap.
std::vector<Configuration> enumerate_configurations(
    const Instance& inst, double cap = kDefaultConfigurationCap);

// Throws InvalidAction when a_i is outside A_i, DimensionMismatch on length.
Configuration config_of_profile(const Instance& inst, const ActionProfile& profile);

extern template CostTable<Rational> expected_cost_functions(const Instance&,
                                                            std::span<const Rational>);
extern template CostTable<double> expected_cost_functions(const Instance&,
                                                          std::span<const double>);
extern template CostTable<Rational> state_cost_table(const Instance&, int);
extern template CostTable<double> state_cost_table(const Instance&, int);

}  // namespace scg
