#include "scg/private_signaling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "scg/error.hpp"
#include "scg/parallel.hpp"
#include "scg/public_signaling.hpp"

namespace scg {
namespace {

constexpr double kBranchFloor = 1e-12;
constexpr double kClampWindow = 1e-9;

struct DenseShape {
  int states;
  int configs;
  int agents;
  int resources;

  std::size_t size() const {
    return static_cast<std::size_t>(states) * configs * agents * resources;
  }
  std::size_t at(int s, int c, int i, int r) const {
    return ((static_cast<std::size_t>(s) * configs + c) * agents + i) * resources + r;
  }
};

DenseShape shape_of(const Instance& inst, const ReducedForm& x) {
  return {inst.num_states(), static_cast<int>(x.configurations.size()), inst.num_agents(),
          inst.num_resources()};
}

std::vector<double> to_dense(const Instance& inst, const ReducedForm& x) {
  const DenseShape shape = shape_of(inst, x);
  for (std::size_t c = 0; c < x.configurations.size(); ++c) {
    const Configuration& n = x.configurations[c];
    int total = 0;
    for (int v : n) total += v;
    if (static_cast<int>(n.size()) != inst.num_resources() || total != inst.num_agents()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "reduced form configuration " + std::to_string(c) + " is not a configuration");
    }
  }
  std::vector<double> dense(shape.size(), 0.0);
  for (const ReducedEntry& e : x.entries) {
    if (e.state < 0 || e.state >= shape.states || e.config < 0 || e.config >= shape.configs ||
        e.agent < 0 || e.agent >= shape.agents || e.resource < 0 ||
        e.resource >= shape.resources) {
      throw Error(ErrorKind::kDimensionMismatch, "reduced form entry index out of range");
    }
    dense[shape.at(e.state, e.config, e.agent, e.resource)] += e.value;
  }
  return dense;
}

std::string describe_config(const Configuration& n) {
  std::string out = "(";
  for (std::size_t r = 0; r < n.size(); ++r) {
    if (r > 0) out += ",";
    out += std::to_string(n[r]);
  }
  return out + ")";
}

double stay_cost(const Instance& inst, int state, const Configuration& n, int r) {
  return n[r] > 0 ? inst.cost_value(state, r, n[r]) : 0.0;
}

// Index of (agent, from, to) among obedience terms in agent-major order.
class ObedienceLayout {
 public:
  explicit ObedienceLayout(const Instance& inst) : inst_(inst) {
    const int r_count = inst.num_resources();
    index_.assign(static_cast<std::size_t>(inst.num_agents()) * r_count * r_count, -1);
    for (int i = 0; i < inst.num_agents(); ++i) {
      for (int r : inst.action_set(i)) {
        for (int t : inst.action_set(i)) {
          if (t == r) continue;
          index_[(i * r_count + r) * r_count + t] = static_cast<int>(terms_.size());
          terms_.push_back({i, r, t, 0.0});
        }
      }
    }
  }

  void accumulate(int state, const Configuration& n, int agent, int r, double mass) {
    const int r_count = inst_.num_resources();
    const double base = stay_cost(inst_, state, n, r);
    for (int t : inst_.action_set(agent)) {
      if (t == r) continue;
      const int k = index_[(agent * r_count + r) * r_count + t];
      if (k < 0) continue;
      terms_[k].value += mass * (base - inst_.cost_value(state, t, n[t] + 1));
    }
  }

  std::vector<ObedienceTerm> take() { return std::move(terms_); }

 private:
  const Instance& inst_;
  std::vector<int> index_;
  std::vector<ObedienceTerm> terms_;
};

// Brings a branch flow back onto {row sums 1, column sums n_r} by alternating
// proportional scaling. Only invoked when solver noise left the columns off.
void balance_flow(BipartiteFlowProblem<double>& problem) {
  const int n = problem.num_agents;
  const int r_count = problem.num_resources;
  for (int iteration = 0; iteration < 1000; ++iteration) {
    double worst = 0;
    for (int r = 0; r < r_count; ++r) {
      double column = 0;
      for (int i = 0; i < n; ++i) column += problem.at(i, r);
      worst = std::max(worst, std::abs(column - problem.demand[r]));
      if (column > 0) {
        for (int i = 0; i < n; ++i) problem.at(i, r) *= problem.demand[r] / column;
      }
    }
    if (worst <= 1e-13) return;
    for (int i = 0; i < n; ++i) {
      double row = 0;
      for (int r = 0; r < r_count; ++r) row += problem.at(i, r);
      if (row > 0) {
        for (int r = 0; r < r_count; ++r) problem.at(i, r) /= row;
      }
    }
  }
}

}  // namespace

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

PrivateSolution solve_optimal_private(const Instance& inst, const SolveOptions& options) {
  const int n_agents = inst.num_agents();
  const int r_count = inst.num_resources();
  const int states = inst.num_states();
  std::vector<Configuration> configs =
      enumerate_configurations(inst, options.limits.configurations);
  const int c_count = static_cast<int>(configs.size());
  const double cells = static_cast<double>(c_count) * n_agents * r_count * states;
  if (cells > options.limits.reduced_cells) {
    throw Error(ErrorKind::kSizeGuard, "reduced form has " + format_double(cells) +
                                           " cells, above the cap " +
                                           format_double(options.limits.reduced_cells));
  }

  LPSpec spec;
  const DenseShape shape{states, c_count, n_agents, r_count};
  std::vector<int> var(shape.size(), -1);
  std::vector<int> q_var(static_cast<std::size_t>(states) * c_count);
  for (int s = 0; s < states; ++s) {
    const double mu = inst.prior_value(s);
    for (int c = 0; c < c_count; ++c) {
      const Configuration& n = configs[c];
      q_var[s * c_count + c] = spec.add_variable(0.0);
      for (int i = 0; i < n_agents; ++i) {
        for (int r : inst.action_set(i)) {
          if (n[r] == 0) continue;
          var[shape.at(s, c, i, r)] = spec.add_variable(mu * inst.cost_value(s, r, n[r]));
        }
      }
    }
  }

  for (int s = 0; s < states; ++s) {
    std::vector<LPTerm> total;
    for (int c = 0; c < c_count; ++c) {
      const Configuration& n = configs[c];
      const int q = q_var[s * c_count + c];
      total.push_back({q, 1.0});
      // Each agent's recommendation mass in branch (s, n) equals P(n | s).
      for (int i = 0; i < n_agents; ++i) {
        std::vector<LPTerm> terms;
        for (int r : inst.action_set(i)) {
          const int v = var[shape.at(s, c, i, r)];
          if (v >= 0) terms.push_back({v, 1.0});
        }
        terms.push_back({q, -1.0});
        spec.add_equal(std::move(terms), 0.0);
      }
      // Resource r is recommended to n_r agents in that branch.
      for (int r = 0; r < r_count; ++r) {
        if (n[r] == 0) continue;
        std::vector<LPTerm> terms;
        for (int i = 0; i < n_agents; ++i) {
          const int v = var[shape.at(s, c, i, r)];
          if (v >= 0) terms.push_back({v, 1.0});
        }
        terms.push_back({q, -static_cast<double>(n[r])});
        spec.add_equal(std::move(terms), 0.0);
      }
    }
    spec.add_equal(std::move(total), 1.0);
  }

  for (int i = 0; i < n_agents; ++i) {
    for (int r : inst.action_set(i)) {
      for (int t : inst.action_set(i)) {
        if (t == r) continue;
        std::vector<LPTerm> terms;
        bool binding = false;
        for (int s = 0; s < states; ++s) {
          const double mu = inst.prior_value(s);
          if (mu == 0) continue;
          for (int c = 0; c < c_count; ++c) {
            const int v = var[shape.at(s, c, i, r)];
            if (v < 0) continue;
            const Configuration& n = configs[c];
            const double coef =
                mu * (inst.cost_value(s, r, n[r]) - inst.cost_value(s, t, n[t] + 1));
            if (coef == 0) continue;
            terms.push_back({v, coef});
            binding = binding || coef > 0;
          }
        }
        if (binding) spec.add_less_equal(std::move(terms), 0.0);
      }
    }
  }

  const LPSolution solution = solve_lp(spec, options.lp);
  if (solution.status != LPStatus::kOptimal) {
    // Full revelation of a per-state NE is always feasible.
    throw Error(ErrorKind::kNumericalFailure,
                std::string("private signaling program reported ") + to_string(solution.status));
  }

  PrivateSolution result;
  result.value = solution.objective;
  for (int s = 0; s < states; ++s) {
    for (int c = 0; c < c_count; ++c) {
      for (int i = 0; i < n_agents; ++i) {
        for (int r = 0; r < r_count; ++r) {
          const int v = var[shape.at(s, c, i, r)];
          if (v < 0 || solution.x[v] <= kBranchFloor) continue;
          result.reduced.entries.push_back({s, c, i, r, solution.x[v]});
        }
      }
    }
  }
  result.reduced.configurations = std::move(configs);
  return result;
}

ExplicitSolution solve_bce_exponential(const Instance& inst, const SolveOptions& options) {
  const int states = inst.num_states();
  double profile_count = 1;
  for (int i = 0; i < inst.num_agents(); ++i) profile_count *= inst.action_set(i).size();
  if (profile_count * states > options.limits.explicit_cells) {
    throw Error(ErrorKind::kSizeGuard, "explicit program has " +
                                           format_double(profile_count * states) +
                                           " cells, above the cap " +
                                           format_double(options.limits.explicit_cells));
  }
  const std::vector<ActionProfile> profiles = enumerate_profiles(inst, profile_count);
  const int a_count = static_cast<int>(profiles.size());
  std::vector<Configuration> configs;
  configs.reserve(profiles.size());
  for (const ActionProfile& a : profiles) configs.push_back(config_of_profile(inst, a));

  LPSpec spec;
  for (int s = 0; s < states; ++s) {
    for (int k = 0; k < a_count; ++k) {
      spec.add_variable(inst.prior_value(s) * state_social_cost(inst, s, configs[k]));
    }
  }
  for (int s = 0; s < states; ++s) {
    std::vector<LPTerm> terms;
    for (int k = 0; k < a_count; ++k) terms.push_back({s * a_count + k, 1.0});
    spec.add_equal(std::move(terms), 1.0);
  }
  for (int i = 0; i < inst.num_agents(); ++i) {
    for (int r : inst.action_set(i)) {
      for (int t : inst.action_set(i)) {
        if (t == r) continue;
        std::vector<LPTerm> terms;
        bool binding = false;
        for (int s = 0; s < states; ++s) {
          const double mu = inst.prior_value(s);
          for (int k = 0; k < a_count; ++k) {
            if (profiles[k][i] != r) continue;
            const Configuration& n = configs[k];
            const double coef =
                mu * (inst.cost_value(s, r, n[r]) - inst.cost_value(s, t, n[t] + 1));
            if (coef == 0) continue;
            terms.push_back({s * a_count + k, coef});
            binding = binding || coef > 0;
          }
        }
        if (binding) spec.add_less_equal(std::move(terms), 0.0);
      }
    }
  }
  const LPSolution solution = solve_lp(spec, options.lp);
  if (solution.status != LPStatus::kOptimal) {
    throw Error(ErrorKind::kNumericalFailure,
                std::string("explicit BCE program reported ") + to_string(solution.status));
  }
  ExplicitSolution result;
  result.value = solution.objective;
  for (int s = 0; s < states; ++s) {
    for (int k = 0; k < a_count; ++k) {
      const double p = solution.x[s * a_count + k];
      if (p > kBranchFloor) result.scheme.entries.push_back({s, profiles[k], p});
    }
  }
  return result;
}

PrivateSolution solve_optimal_ce(const Instance& inst, const SolveOptions& options) {
  if (inst.num_states() != 1) {
    throw Error(ErrorKind::kInvalidParams,
                "correlated equilibrium mode needs exactly one state, got " +
                    std::to_string(inst.num_states()));
  }
  return solve_optimal_private(inst, options);
}

ReducedForm induced_reduced_form(const Instance& inst, const ExplicitScheme& scheme,
                                 double cap) {
  ReducedForm x;
  x.configurations = enumerate_configurations(inst, cap);
  std::map<Configuration, int> index;
  for (std::size_t c = 0; c < x.configurations.size(); ++c) {
    index.emplace(x.configurations[c], static_cast<int>(c));
  }
  const DenseShape shape = shape_of(inst, x);
  std::vector<double> dense(shape.size(), 0.0);
  for (const ExplicitEntry& e : scheme.entries) {
    const int c = index.at(config_of_profile(inst, e.profile));
    for (int i = 0; i < inst.num_agents(); ++i) {
      dense[shape.at(e.state, c, i, e.profile[i])] += e.probability;
    }
  }
  for (int s = 0; s < shape.states; ++s) {
    for (int c = 0; c < shape.configs; ++c) {
      for (int i = 0; i < shape.agents; ++i) {
        for (int r = 0; r < shape.resources; ++r) {
          const double v = dense[shape.at(s, c, i, r)];
          if (v != 0) x.entries.push_back({s, c, i, r, v});
        }
      }
    }
  }
  return x;
}

Report check_reduced_feasibility(const Instance& inst, const ReducedForm& x, double tol) {
  Report report;
  const DenseShape shape = shape_of(inst, x);
  const std::vector<double> dense = to_dense(inst, x);
  auto cell = [&](int s, int c, int i, int r) {
    return "state " + inst.state_name(s) + ", config " + describe_config(x.configurations[c]) +
           ", agent " + std::to_string(i) + ", resource " + inst.resource_name(r);
  };
  for (int s = 0; s < shape.states; ++s) {
    std::vector<double> agent_mass(shape.agents, 0.0);
    for (int c = 0; c < shape.configs; ++c) {
      const Configuration& n = x.configurations[c];
      std::vector<double> row(shape.agents, 0.0);
      std::vector<double> column(shape.resources, 0.0);
      for (int i = 0; i < shape.agents; ++i) {
        for (int r = 0; r < shape.resources; ++r) {
          const double v = dense[shape.at(s, c, i, r)];
          if (v < -tol) report.violations.push_back({"sign", cell(s, c, i, r), -v});
          if (!inst.allows(i, r) && std::abs(v) > tol) {
            report.violations.push_back({"availability", cell(s, c, i, r), std::abs(v)});
          }
          row[i] += v;
          column[r] += v;
        }
        agent_mass[i] += row[i];
      }
      for (int i = 0; i < shape.agents; ++i) {
        for (int r = 0; r < shape.resources; ++r) {
          const double residual = std::abs(column[r] - n[r] * row[i]);
          if (residual > tol) report.violations.push_back({"coupling", cell(s, c, i, r), residual});
        }
      }
    }
    for (int i = 0; i < shape.agents; ++i) {
      const double residual = std::abs(agent_mass[i] - 1.0);
      if (residual > tol) {
        report.violations.push_back(
            {"agent-mass", "state " + inst.state_name(s) + ", agent " + std::to_string(i),
             residual});
      }
    }
  }
  return report;
}

std::vector<ObedienceTerm> obedience_terms(const Instance& inst, const ExplicitScheme& scheme) {
  ObedienceLayout layout(inst);
  for (const ExplicitEntry& e : scheme.entries) {
    const Configuration n = config_of_profile(inst, e.profile);
    const double mass = inst.prior_value(e.state) * e.probability;
    for (int i = 0; i < inst.num_agents(); ++i) {
      layout.accumulate(e.state, n, i, e.profile[i], mass);
    }
  }
  return layout.take();
}

std::vector<ObedienceTerm> obedience_terms(const Instance& inst, const ReducedForm& x) {
  ObedienceLayout layout(inst);
  for (const ReducedEntry& e : x.entries) {
    if (!inst.allows(e.agent, e.resource)) continue;
    layout.accumulate(e.state, x.configurations.at(e.config), e.agent, e.resource,
                      inst.prior_value(e.state) * e.value);
  }
  return layout.take();
}

Report check_obedience(const Instance& inst, const ExplicitScheme& scheme, double tol) {
  Report report;
  for (const ObedienceTerm& term : obedience_terms(inst, scheme)) {
    if (term.value > tol) {
      report.violations.push_back({"obedience",
                                   "agent " + std::to_string(term.agent) + " told " +
                                       inst.resource_name(term.from) + " prefers " +
                                       inst.resource_name(term.to),
                                   term.value});
    }
  }
  return report;
}

void validate_explicit_scheme(const Instance& inst, const ExplicitScheme& scheme, double tol) {
  std::vector<double> total(inst.num_states(), 0.0);
  for (std::size_t k = 0; k < scheme.entries.size(); ++k) {
    const ExplicitEntry& e = scheme.entries[k];
    const std::string where = "explicit[" + std::to_string(k) + "]";
    if (e.state < 0 || e.state >= inst.num_states()) {
      throw Error(ErrorKind::kInvalidScheme, where + " names an unknown state");
    }
    try {
      config_of_profile(inst, e.profile);
    } catch (const Error& err) {
      throw Error(ErrorKind::kInvalidScheme, where + ": " + err.what());
    }
    if (e.probability < -tol) {
      throw Error(ErrorKind::kInvalidScheme, where + " has negative probability");
    }
    total[e.state] += e.probability;
  }
  for (int s = 0; s < inst.num_states(); ++s) {
    if (std::abs(total[s] - 1.0) > tol) {
      throw Error(ErrorKind::kInvalidScheme, "probabilities in state " + inst.state_name(s) +
                                                 " sum to " + format_double(total[s]));
    }
  }
}

double explicit_cost(const Instance& inst, const ExplicitScheme& scheme) {
  double total = 0;
  for (const ExplicitEntry& e : scheme.entries) {
    total += inst.prior_value(e.state) * e.probability *
             state_social_cost(inst, e.state, config_of_profile(inst, e.profile));
  }
  return total;
}

double reduced_cost(const Instance& inst, const ReducedForm& x) {
  double total = 0;
  for (const ReducedEntry& e : x.entries) {
    const Configuration& n = x.configurations.at(e.config);
    total += inst.prior_value(e.state) * e.value * stay_cost(inst, e.state, n, e.resource);
  }
  return total;
}

PrivateSampler::PrivateSampler(const Instance& inst, const ReducedForm& x)
    : inst_(inst), configs_(x.configurations), dense_(to_dense(inst, x)) {
  const DenseShape shape = shape_of(inst, x);
  for (std::size_t k = 0; k < dense_.size(); ++k) {
    double& v = dense_[k];
    if (v < -kClampWindow) {
      throw Error(ErrorKind::kInfeasibleMarginals,
                  "reduced form has a negative cell " + format_double(v));
    }
    if (v < 0) v = 0;
  }
  for (int s = 0; s < shape.states; ++s) {
    for (int i = 0; i < shape.agents; ++i) {
      double total = 0;
      for (int c = 0; c < shape.configs; ++c) {
        for (int r = 0; r < shape.resources; ++r) {
          const double v = dense_[shape.at(s, c, i, r)];
          if (v > kClampWindow && !inst.allows(i, r)) {
            throw Error(ErrorKind::kInfeasibleMarginals,
                        "agent " + std::to_string(i) + " is recommended an unavailable resource");
          }
          total += v;
        }
      }
      if (total <= 0) {
        throw Error(ErrorKind::kInfeasibleMarginals,
                    "agent " + std::to_string(i) + " has no recommendation mass in state " +
                        inst.state_name(s));
      }
      for (int c = 0; c < shape.configs; ++c) {
        for (int r = 0; r < shape.resources; ++r) dense_[shape.at(s, c, i, r)] /= total;
      }
    }
  }
  branch_mass_.assign(static_cast<std::size_t>(shape.states) * shape.configs, 0.0);
  for (int s = 0; s < shape.states; ++s) {
    for (int c = 0; c < shape.configs; ++c) {
      double total = 0;
      for (int i = 0; i < shape.agents; ++i) {
        for (int r = 0; r < shape.resources; ++r) total += dense_[shape.at(s, c, i, r)];
      }
      branch_mass_[s * shape.configs + c] = total / shape.agents;
    }
  }
  decompositions_.resize(branch_mass_.size());
  decomposed_.assign(branch_mass_.size(), 0);
}

double PrivateSampler::branch_probability(int state, int config) const {
  return branch_mass_[state * num_configurations() + config];
}

const FlowDecomposition<double>& PrivateSampler::branch(int state, int config) {
  const std::size_t slot = state * num_configurations() + config;
  if (decomposed_[slot]) return decompositions_[slot];
  if (branch_mass_[slot] <= kBranchFloor) {
    throw Error(ErrorKind::kDegenerateConfiguration,
                "configuration " + describe_config(configs_[config]) +
                    " has no mass in state " + inst_.state_name(state));
  }
  const DenseShape shape{inst_.num_states(), num_configurations(), inst_.num_agents(),
                         inst_.num_resources()};
  BipartiteFlowProblem<double> problem;
  problem.num_agents = shape.agents;
  problem.num_resources = shape.resources;
  problem.demand = configs_[config];
  problem.flow.assign(static_cast<std::size_t>(shape.agents) * shape.resources, 0.0);
  for (int i = 0; i < shape.agents; ++i) {
    double row = 0;
    for (int r = 0; r < shape.resources; ++r) row += dense_[shape.at(state, config, i, r)];
    if (row <= 0) {
      throw Error(ErrorKind::kInfeasibleMarginals,
                  "agent " + std::to_string(i) + " has no mass in configuration " +
                      describe_config(configs_[config]));
    }
    for (int r = 0; r < shape.resources; ++r) {
      problem.at(i, r) = dense_[shape.at(state, config, i, r)] / row;
    }
  }
  balance_flow(problem);
  decompositions_[slot] = decompose_fractional_flow(std::move(problem));
  decomposed_[slot] = 1;
  return decompositions_[slot];
}

void PrivateSampler::decompose_all(int threads) {
  std::vector<int> slots;
  for (std::size_t k = 0; k < branch_mass_.size(); ++k) {
    if (branch_mass_[k] > kBranchFloor) slots.push_back(static_cast<int>(k));
  }
  const int c_count = num_configurations();
  parallel_for(static_cast<int>(slots.size()), threads, [&](int k) {
    branch(slots[k] / c_count, slots[k] % c_count);
  });
}

ActionProfile PrivateSampler::sample(int state, std::mt19937_64& rng) {
  if (state < 0 || state >= inst_.num_states()) {
    throw Error(ErrorKind::kDimensionMismatch, "unknown state index " + std::to_string(state));
  }
  const int c_count = num_configurations();
  double total = 0;
  for (int c = 0; c < c_count; ++c) total += branch_probability(state, c);
  const double u = uniform01(rng) * total;
  int chosen = -1;
  double cumulative = 0;
  for (int c = 0; c < c_count; ++c) {
    const double mass = branch_probability(state, c);
    if (mass <= kBranchFloor) continue;
    chosen = c;
    cumulative += mass;
    if (u < cumulative) break;
  }
  if (chosen < 0) {
    throw Error(ErrorKind::kDegenerateConfiguration,
                "no configuration has mass in state " + inst_.state_name(state));
  }
  const FlowDecomposition<double>& decomposition = branch(state, chosen);
  const double v = uniform01(rng);
  double acc = 0;
  for (std::size_t k = 0; k < decomposition.weights.size(); ++k) {
    acc += decomposition.weights[k];
    if (v < acc) return decomposition.assignments[k];
  }
  return decomposition.assignments.back();
}

ActionProfile sample_private(const Instance& inst, const ReducedForm& x, int state,
                             std::mt19937_64& rng) {
  PrivateSampler sampler(inst, x);
  return sampler.sample(state, rng);
}

ExplicitScheme explicit_from_reduced(const Instance& inst, const ReducedForm& x,
                                     const SolveOptions& options, ConversionStats* stats) {
  PrivateSampler sampler(inst, x);
  sampler.decompose_all(options.threads);
  const int c_count = sampler.num_configurations();
  std::map<std::pair<int, ActionProfile>, double> merged;
  ConversionStats local;
  for (int s = 0; s < inst.num_states(); ++s) {
    for (int c = 0; c < c_count; ++c) {
      const double mass = sampler.branch_probability(s, c);
      if (mass <= kBranchFloor) continue;
      const FlowDecomposition<double>& d = sampler.branch(s, c);
      ++local.branches;
      local.max_rounds = std::max(local.max_rounds, d.rounds);
      for (std::size_t k = 0; k < d.assignments.size(); ++k) {
        merged[{s, d.assignments[k]}] += mass * d.weights[k];
      }
    }
  }
  std::vector<double> total(inst.num_states(), 0.0);
  for (const auto& [key, p] : merged) total[key.first] += p;
  ExplicitScheme scheme;
  for (const auto& [key, p] : merged) {
    scheme.entries.push_back({key.first, key.second, p / total[key.first]});
  }
  if (stats != nullptr) *stats = local;
  return scheme;
}

}  // namespace scg
