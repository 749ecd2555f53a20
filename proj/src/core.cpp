#include "scg/core.hpp"

#include <algorithm>
#include <string>

#include "scg/error.hpp"
#include "scg/flow.hpp"

namespace scg {
namespace {

std::string state_field(int s) { return "states[" + std::to_string(s) + "]"; }

void check_dimensions(const RawInstance& raw) {
  if (raw.num_agents < 1) {
    throw Error(ErrorKind::kDimensionMismatch, "num_agents must be at least 1");
  }
  if (raw.resources.empty()) {
    throw Error(ErrorKind::kDimensionMismatch, "resources must be non-empty");
  }
  if (raw.states.empty()) {
    throw Error(ErrorKind::kDimensionMismatch, "states must be non-empty");
  }
  if (static_cast<int>(raw.action_sets.size()) != raw.num_agents) {
    throw Error(ErrorKind::kDimensionMismatch,
                "action_sets has " + std::to_string(raw.action_sets.size()) +
                    " entries for " + std::to_string(raw.num_agents) + " agents");
  }
  const int r_count = static_cast<int>(raw.resources.size());
  for (std::size_t s = 0; s < raw.states.size(); ++s) {
    const auto& costs = raw.states[s].costs;
    if (static_cast<int>(costs.size()) != r_count) {
      throw Error(ErrorKind::kDimensionMismatch,
                  state_field(static_cast<int>(s)) + ".costs has " +
                      std::to_string(costs.size()) + " resources, expected " +
                      std::to_string(r_count));
    }
    for (int r = 0; r < r_count; ++r) {
      if (static_cast<int>(costs[r].size()) != raw.num_agents) {
        throw Error(ErrorKind::kDimensionMismatch,
                    state_field(static_cast<int>(s)) + ".costs." + raw.resources[r] +
                        " has " + std::to_string(costs[r].size()) +
                        " entries, expected " + std::to_string(raw.num_agents));
      }
    }
  }
}

}  // namespace

std::vector<Rational> Instance::prior_vector() const {
  std::vector<Rational> out;
  out.reserve(raw_.states.size());
  for (const auto& state : raw_.states) out.push_back(state.prior);
  return out;
}

int Instance::state_index(const std::string& state_name) const {
  for (int s = 0; s < num_states(); ++s) {
    if (raw_.states[s].name == state_name) return s;
  }
  return -1;
}

int Instance::resource_index(const std::string& resource_name) const {
  for (int r = 0; r < num_resources(); ++r) {
    if (raw_.resources[r] == resource_name) return r;
  }
  return -1;
}

Instance validate_instance(RawInstance raw) {
  check_dimensions(raw);
  const int n_agents = raw.num_agents;
  const int r_count = static_cast<int>(raw.resources.size());

  for (int i = 0; i < n_agents; ++i) {
    auto& actions = raw.action_sets[i];
    if (actions.empty()) {
      throw Error(ErrorKind::kEmptyActionSet,
                  "action_sets[" + std::to_string(i) + "] is empty");
    }
    for (int r : actions) {
      if (r < 0 || r >= r_count) {
        throw Error(ErrorKind::kInvalidAction,
                    "action_sets[" + std::to_string(i) + "] contains resource " +
                        std::to_string(r) + " outside [0, " + std::to_string(r_count) +
                        ")");
      }
    }
    std::sort(actions.begin(), actions.end());
    actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
  }

  Rational prior_sum = 0;
  for (std::size_t s = 0; s < raw.states.size(); ++s) {
    const RawState& state = raw.states[s];
    if (state.prior < 0) {
      throw Error(ErrorKind::kPriorNotNormalized,
                  state_field(static_cast<int>(s)) + ".prior is negative");
    }
    prior_sum += state.prior;
    for (int r = 0; r < r_count; ++r) {
      const auto& column = state.costs[r];
      for (int n = 0; n < n_agents; ++n) {
        if (column[n] < 0) {
          throw Error(ErrorKind::kNegativeCost,
                      state_field(static_cast<int>(s)) + ".costs." + raw.resources[r] +
                          "[" + std::to_string(n) + "] = " + format_rational(column[n]));
        }
        if (n > 0 && column[n] < column[n - 1]) {
          throw Error(ErrorKind::kCostNotMonotone,
                      state_field(static_cast<int>(s)) + ".costs." + raw.resources[r] +
                          " decreases at index " + std::to_string(n));
        }
      }
    }
  }
  if (prior_sum != 1) {
    throw Error(ErrorKind::kPriorNotNormalized,
                "priors sum to " + format_rational(prior_sum) + ", expected 1");
  }

  Instance inst;
  inst.raw_ = std::move(raw);
  inst.allowed_.assign(static_cast<std::size_t>(n_agents) * r_count, 0);
  for (int i = 0; i < n_agents; ++i) {
    for (int r : inst.raw_.action_sets[i]) {
      inst.allowed_[i * r_count + r] = 1;
      inst.edges_.emplace_back(i, r);
    }
    if (static_cast<int>(inst.raw_.action_sets[i].size()) != r_count) {
      inst.symmetric_ = false;
    }
  }
  for (const RawState& state : inst.raw_.states) {
    inst.prior_double_.push_back(to_double(state.prior));
    for (int r = 0; r < r_count; ++r) {
      for (const Rational& c : state.costs[r]) inst.cost_double_.push_back(to_double(c));
    }
  }
  return inst;
}

template <typename T>
CostTable<T> expected_cost_functions(const Instance& inst, std::span<const T> posterior) {
  if (static_cast<int>(posterior.size()) != inst.num_states()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "posterior has " + std::to_string(posterior.size()) + " entries for " +
                    std::to_string(inst.num_states()) + " states");
  }
  CostTable<T> table(inst.num_resources(), inst.num_agents());
  for (int s = 0; s < inst.num_states(); ++s) {
    if (posterior[s] == 0) continue;
    for (int r = 0; r < inst.num_resources(); ++r) {
      for (int n = 1; n <= inst.num_agents(); ++n) {
        table.at(r, n) += posterior[s] * inst.cost_as<T>(s, r, n);
      }
    }
  }
  return table;
}

template <typename T>
CostTable<T> state_cost_table(const Instance& inst, int state) {
  CostTable<T> table(inst.num_resources(), inst.num_agents());
  for (int r = 0; r < inst.num_resources(); ++r) {
    for (int n = 1; n <= inst.num_agents(); ++n) table.at(r, n) = inst.cost_as<T>(state, r, n);
  }
  return table;
}

double count_compositions(int num_agents, int num_resources) {
  // C(N + R - 1, R - 1)
  double result = 1;
  for (int k = 1; k < num_resources; ++k) {
    result = result * (num_agents + k) / k;
  }
  return result;
}

bool configuration_feasible(const Instance& inst, const Configuration& n) {
  if (inst.symmetric()) return true;
  return assign_with_demands(inst.num_agents(), inst.num_resources(),
                             inst.availability_edges(), n)
      .has_value();
}

std::vector<Configuration> enumerate_configurations(const Instance& inst, double cap) {
  const int n_agents = inst.num_agents();
  const int r_count = inst.num_resources();
  const double total = count_compositions(n_agents, r_count);
  if (total > cap) {
    throw Error(ErrorKind::kSizeGuard,
                format_double(total) + " candidate configurations exceed the cap of " +
                    format_double(cap));
  }
  std::vector<Configuration> out;
  Configuration current(r_count, 0);
  // Lexicographic order: the first coordinate varies slowest.
  auto recurse = [&](auto&& self, int index, int left) -> void {
    if (index == r_count - 1) {
      current[index] = left;
      if (configuration_feasible(inst, current)) out.push_back(current);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      current[index] = v;
      self(self, index + 1, left - v);
    }
  };
  recurse(recurse, 0, n_agents);
  return out;
}

Configuration config_of_profile(const Instance& inst, const ActionProfile& profile) {
  if (static_cast<int>(profile.size()) != inst.num_agents()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "profile has " + std::to_string(profile.size()) + " entries for " +
                    std::to_string(inst.num_agents()) + " agents");
  }
  Configuration n(inst.num_resources(), 0);
  for (int i = 0; i < inst.num_agents(); ++i) {
    const int r = profile[i];
    if (r < 0 || r >= inst.num_resources() || !inst.allows(i, r)) {
      throw Error(ErrorKind::kInvalidAction, "agent " + std::to_string(i) +
                                                 " cannot use resource " +
                                                 std::to_string(r));
    }
    ++n[r];
  }
  return n;
}

template CostTable<Rational> expected_cost_functions(const Instance&,
                                                     std::span<const Rational>);
template CostTable<double> expected_cost_functions(const Instance&, std::span<const double>);
template CostTable<Rational> state_cost_table(const Instance&, int);
template CostTable<double> state_cost_table(const Instance&, int);

}  // namespace scg
