#pragma once

#include <optional>
#include <span>
#include <vector>

#include "scg/core.hpp"
#include "scg/equilibrium.hpp"
#include "scg/options.hpp"

namespace scg {

struct PublicSignal {
  std::vector<double> emission;   // pi(sigma | theta) per state
  std::vector<double> posterior;  // Pr(theta | sigma)
  double probability = 0;         // Pr(sigma)
  Configuration recommended_config;
  ActionProfile recommended_assignment;
  double expected_cost = 0;       // social cost of the recommendation at the posterior
};

struct PublicScheme {
  std::vector<PublicSignal> signals;
};

enum class Selection { kBest, kWorst };

// Builds a scheme from emission probabilities emission[signal][state]:
// derives Pr(sigma), posteriors and a best-NE recommendation per signal.
// Signals with Pr(sigma) below 1e-12 are dropped.
PublicScheme make_public_scheme(const Instance& inst,
                                const std::vector<std::vector<double>>& emission,
                                double cap = kDefaultConfigurationCap);

// Throws InvalidScheme unless emissions are stochastic per state, posteriors
// match Bayes' rule, the posteriors average back to the prior, and every
// recommendation is a pure NE at its posterior (all within tol).
void validate_public_scheme(const Instance& inst, const PublicScheme& scheme,
                            double tol = 1e-7);

double evaluate_public_scheme(const Instance& inst, const PublicScheme& scheme,
                              Selection selection, double cap = kDefaultConfigurationCap);

PublicScheme full_info_scheme(const Instance& inst);
PublicScheme no_info_scheme(const Instance& inst);

// Social cost of configuration n in state theta: sum_r n_r c_r^theta(n_r).
double state_social_cost(const Instance& inst, int state, const Configuration& n);

struct WeightedPosterior {
  std::vector<double> posterior;
  double objective = 0;  // SC at the posterior plus w . p
};

// min_p  sum_theta p_theta (SC(n(a), theta) + w_theta)  over posteriors at
// which profile a is a pure NE; nullopt when that region is empty.
std::optional<WeightedPosterior> per_profile_lp(const Instance& inst,
                                                std::span<const double> weights,
                                                const ActionProfile& profile,
                                                const LPOptions& lp = {});

// Same objective over posteriors inducing signature sig; GT labels are
// encoded as weak >= rows. nullopt when the region is empty.
std::optional<WeightedPosterior> per_signature_lp(const Instance& inst,
                                                  std::span<const double> weights,
                                                  const Signature& sig,
                                                  const LPOptions& lp = {});

struct BestWeightedPosterior {
  std::vector<double> posterior;
  Signature signature;
  double objective = 0;
};

// Global minimum of SC*(C(p)) + w . p by enumerating signatures, filtering by
// obeying-assignment existence, and solving one LP per survivor. Ties keep
// the first signature in enumeration order. Throws SizeGuard when
// N^R * 2^(R(R-1)) exceeds limits.signatures.
BestWeightedPosterior best_weighted_posterior(const Instance& inst,
                                              std::span<const double> weights,
                                              const SolveOptions& options = {});

struct PublicSolution {
  PublicScheme scheme;
  double value = 0;     // sum_sigma Pr(sigma) * SC at the recommended NE
  double lp_value = 0;  // objective of the aggregated program
  int blocks = 0;       // posterior regions offered to the program
};

// Optimal public scheme under optimistic selection from one aggregated LP
// with an unnormalized posterior vector per (configuration, minimal set of
// required no-deviation rows) region.
PublicSolution solve_optimal_public(const Instance& inst, const SolveOptions& options = {});

// The same program with one block per action profile; exponential in N and
// intended as an independent cross-check. Throws SizeGuard when the number
// of profiles exceeds limits.profiles.
PublicSolution solve_public_by_profiles(const Instance& inst,
                                        const SolveOptions& options = {});

// Valid action profiles (a_i in A_i) in lexicographic order.
std::vector<ActionProfile> enumerate_profiles(const Instance& inst, double cap);

}  // namespace scg
