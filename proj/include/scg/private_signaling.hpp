#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scg/core.hpp"
#include "scg/flow.hpp"
#include "scg/options.hpp"

namespace scg {

// x(theta, n, i, r): probability that the state is theta, the configuration
// is n and agent i is told r. `config` indexes `configurations`, which is
// the enumerate_configurations order. Only non-zero cells are stored.
struct ReducedEntry {
  int state;
  int config;
  int agent;
  int resource;
  double value;
};

struct ReducedForm {
  std::vector<Configuration> configurations;
  std::vector<ReducedEntry> entries;
};

struct ExplicitEntry {
  int state;
  ActionProfile profile;
  double probability;  // pi(a | theta)
};

// Sorted by (state, profile).
struct ExplicitScheme {
  std::vector<ExplicitEntry> entries;
};

struct PrivateSolution {
  ReducedForm reduced;
  double value = 0;
};

struct ExplicitSolution {
  ExplicitScheme scheme;
  double value = 0;
};

// Minimum-cost obedient reduced form subject to the implementability
// constraints. Variables exist only for r in A_i with n_r > 0; an auxiliary
// q(theta, n) = P(n | theta) couples agents. Throws SizeGuard when
// |P(A)| * N * R * |Theta| exceeds limits.reduced_cells.
PrivateSolution solve_optimal_private(const Instance& inst, const SolveOptions& options = {});

// Optimal Bayes correlated equilibrium over explicit pi(a | theta). Throws
// SizeGuard when (number of profiles) * |Theta| exceeds limits.explicit_cells.
ExplicitSolution solve_bce_exponential(const Instance& inst, const SolveOptions& options = {});

// Single-state instances only (InvalidParams otherwise).
PrivateSolution solve_optimal_ce(const Instance& inst, const SolveOptions& options = {});

ReducedForm induced_reduced_form(const Instance& inst, const ExplicitScheme& scheme,
                                 double cap = kDefaultConfigurationCap);

struct Violation {
  std::string constraint;  // "availability", "sign", "agent-mass", "coupling", "obedience"
  std::string where;
  double residual;
};

struct Report {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

Report check_reduced_feasibility(const Instance& inst, const ReducedForm& x, double tol = 1e-7);

// Per (agent, recommended r, deviation r') obedience; rows with no
// recommendation mass are satisfied vacuously.
Report check_obedience(const Instance& inst, const ExplicitScheme& scheme, double tol = 1e-7);

// Throws InvalidScheme unless each profile is valid and pi(. | theta) is a
// distribution within tol for every state.
void validate_explicit_scheme(const Instance& inst, const ExplicitScheme& scheme,
                              double tol = 1e-7);

struct ObedienceTerm {
  int agent;
  int from;
  int to;
  double value;  // sum_theta mu_theta E[cost(from) - cost(deviation to `to`)] mass-weighted
};

// Obedience left-hand sides for every (i, r, r') with r != r' in A_i, in
// agent-major order, computed from an explicit scheme or from its reduced form.
std::vector<ObedienceTerm> obedience_terms(const Instance& inst, const ExplicitScheme& scheme);
std::vector<ObedienceTerm> obedience_terms(const Instance& inst, const ReducedForm& x);

double explicit_cost(const Instance& inst, const ExplicitScheme& scheme);
double reduced_cost(const Instance& inst, const ReducedForm& x);

struct ConversionStats {
  int branches = 0;
  int max_rounds = 0;
};

// Decomposes every (state, configuration) branch into integer assignments
// and sets pi(a | theta) = p_k P(n | theta).
ExplicitScheme explicit_from_reduced(const Instance& inst, const ReducedForm& x,
                                     const SolveOptions& options = {},
                                     ConversionStats* stats = nullptr);

// Samples profiles from a reduced form, decomposing a configuration branch
// the first time it is drawn.
class PrivateSampler {
 public:
  PrivateSampler(const Instance& inst, const ReducedForm& x);

  ActionProfile sample(int state, std::mt19937_64& rng);

  // P(n | theta) for configuration index c.
  double branch_probability(int state, int config) const;
  const FlowDecomposition<double>& branch(int state, int config);
  int num_configurations() const { return static_cast<int>(configs_.size()); }
  const std::vector<Configuration>& configurations() const { return configs_; }

  // Decomposes every branch with positive mass up front.
  void decompose_all(int threads);

 private:
  const Instance& inst_;
  std::vector<Configuration> configs_;
  std::vector<double> dense_;         // re-projected x, dense
  std::vector<double> branch_mass_;   // state * C + config
  std::vector<FlowDecomposition<double>> decompositions_;  // state * C + config
  std::vector<char> decomposed_;
};

// One draw: a configuration by P(n | theta), then an
// assignment by the branch's decomposition weights.
ActionProfile sample_private(const Instance& inst, const ReducedForm& x, int state,
                             std::mt19937_64& rng);

// Uniform double in [0, 1) from the top 53 bits of one engine output.
double uniform01(std::mt19937_64& rng);

}  // namespace scg
