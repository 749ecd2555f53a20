#pragma once

#include <string>
#include <vector>

#include "scg/core.hpp"
#include "scg/instances.hpp"

namespace scg::testing {

// costs[state][resource][n - 1], integer entries.
inline Instance make_instance(int num_agents,
                              const std::vector<std::vector<std::vector<int>>>& costs,
                              const std::vector<Rational>& prior,
                              std::vector<std::vector<int>> action_sets = {}) {
  RawInstance raw;
  raw.name = "fixture";
  raw.num_agents = num_agents;
  const int r_count = static_cast<int>(costs.front().size());
  for (int r = 0; r < r_count; ++r) raw.resources.push_back("r" + std::to_string(r + 1));
  if (action_sets.empty()) {
    std::vector<int> all;
    for (int r = 0; r < r_count; ++r) all.push_back(r);
    action_sets.assign(num_agents, all);
  }
  raw.action_sets = std::move(action_sets);
  for (std::size_t s = 0; s < costs.size(); ++s) {
    RawState state;
    state.name = "s" + std::to_string(s + 1);
    state.prior = prior[s];
    for (const auto& column : costs[s]) {
      std::vector<Rational> values;
      for (int v : column) values.emplace_back(v);
      state.costs.push_back(std::move(values));
    }
    raw.states.push_back(std::move(state));
  }
  return validate_instance(std::move(raw));
}

// Two agents, two resources, one state, c(n) = n.
inline Instance t1() { return make_instance(2, {{{1, 2}, {1, 2}}}, {Rational(1)}); }

inline Instance table1(Rational p1 = Rational(1, 2)) {
  const std::vector<Rational> prior{p1, 1 - p1};
  return gen_table1(prior);
}

// Every valid action profile, agent 0 most significant.
inline std::vector<ActionProfile> all_profiles(const Instance& inst) {
  std::vector<ActionProfile> out;
  ActionProfile a(inst.num_agents());
  std::vector<std::size_t> digit(inst.num_agents(), 0);
  while (true) {
    for (int i = 0; i < inst.num_agents(); ++i) a[i] = inst.action_set(i)[digit[i]];
    out.push_back(a);
    int i = inst.num_agents() - 1;
    while (i >= 0 && ++digit[i] == inst.action_set(i).size()) digit[i--] = 0;
    if (i < 0) return out;
  }
}

inline std::vector<double> as_doubles(const std::vector<Rational>& values) {
  std::vector<double> out;
  for (const Rational& v : values) out.push_back(to_double(v));
  return out;
}

}  // namespace scg::testing
