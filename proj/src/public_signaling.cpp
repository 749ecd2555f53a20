#include "scg/public_signaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scg/error.hpp"
#include "scg/flow.hpp"
#include "scg/parallel.hpp"

namespace scg {
namespace {

constexpr double kSignalFloor = 1e-12;

// A posterior region: configuration n, witness assignment, and the ordered
// pairs (r, r') whose no-deviation row C_r(n_r) <= C_r'(n_r' + 1) it imposes.
struct Block {
  Configuration config;
  ActionProfile witness;
  std::vector<std::pair<int, int>> rows;
};

double deviation_coefficient(const Instance& inst, int state, const Configuration& n, int from,
                             int to) {
  const double stay = n[from] > 0 ? inst.cost_value(state, from, n[from]) : 0.0;
  return stay - inst.cost_value(state, to, n[to] + 1);
}

std::vector<double> config_state_costs(const Instance& inst, const Configuration& n) {
  std::vector<double> out(inst.num_states());
  for (int s = 0; s < inst.num_states(); ++s) out[s] = state_social_cost(inst, s, n);
  return out;
}

void check_weights(const Instance& inst, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != inst.num_states()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "weight vector has " + std::to_string(weights.size()) + " entries for " +
                    std::to_string(inst.num_states()) + " states");
  }
}

// min sum_theta p_theta (SC(n, theta) + w_theta) over the simplex with extra
// rows (coefficients per state, sense) where sense +1 means <= 0 and -1 >= 0.
std::optional<WeightedPosterior> solve_posterior_lp(
    const Instance& inst, std::span<const double> weights, const Configuration& n,
    const std::vector<std::pair<std::vector<double>, int>>& rows, const LPOptions& lp) {
  const int states = inst.num_states();
  LPSpec spec;
  const std::vector<double> sc = config_state_costs(inst, n);
  for (int s = 0; s < states; ++s) spec.add_variable(sc[s] + weights[s]);
  std::vector<LPTerm> simplex;
  for (int s = 0; s < states; ++s) simplex.push_back({s, 1.0});
  spec.add_equal(simplex, 1.0);
  for (const auto& [coefs, sense] : rows) {
    std::vector<LPTerm> terms;
    for (int s = 0; s < states; ++s) {
      if (coefs[s] != 0) terms.push_back({s, coefs[s]});
    }
    if (sense > 0) {
      spec.add_less_equal(std::move(terms), 0.0);
    } else {
      spec.add_greater_equal(std::move(terms), 0.0);
    }
  }
  const LPSolution solution = solve_lp(spec, lp);
  if (solution.status == LPStatus::kInfeasible) return std::nullopt;
  if (solution.status != LPStatus::kOptimal) {
    throw Error(ErrorKind::kNumericalFailure, "posterior program is unbounded");
  }
  return WeightedPosterior{solution.x, solution.objective};
}

std::vector<double> coefficient_row(const Instance& inst, const Configuration& n, int from,
                                    int to) {
  std::vector<double> row(inst.num_states());
  for (int s = 0; s < inst.num_states(); ++s) {
    row[s] = deviation_coefficient(inst, s, n, from, to);
  }
  return row;
}

// Ordered pairs (r, r') with n_r > 0 such that some agent may use both.
std::vector<std::pair<int, int>> relevant_pairs(const Instance& inst, const Configuration& n) {
  const int r_count = inst.num_resources();
  std::vector<char> shared(static_cast<std::size_t>(r_count) * r_count, 0);
  for (int i = 0; i < inst.num_agents(); ++i) {
    for (int r : inst.action_set(i)) {
      for (int t : inst.action_set(i)) shared[r * r_count + t] = 1;
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (int r = 0; r < r_count; ++r) {
    if (n[r] == 0) continue;
    for (int t = 0; t < r_count; ++t) {
      if (t != r && shared[r * r_count + t]) pairs.emplace_back(r, t);
    }
  }
  return pairs;
}

// Every inclusion-minimal set L of required no-deviation rows for which the
// edges they make allowable carry an assignment realizing n. Any posterior at
// which n is an equilibrium satisfies the rows of at least one such L.
std::vector<Block> minimal_blocks(const Instance& inst, const Configuration& n) {
  const int r_count = inst.num_resources();
  const auto pairs = relevant_pairs(inst, n);
  const int k = static_cast<int>(pairs.size());
  std::vector<int> pair_index(static_cast<std::size_t>(r_count) * r_count, -1);
  for (int p = 0; p < k; ++p) pair_index[pairs[p].first * r_count + pairs[p].second] = p;

  auto assignment_for = [&](const std::vector<char>& required) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < inst.num_agents(); ++i) {
      for (int r : inst.action_set(i)) {
        if (n[r] == 0) continue;
        bool allowed = true;
        for (int t : inst.action_set(i)) {
          if (t != r && !required[pair_index[r * r_count + t]]) {
            allowed = false;
            break;
          }
        }
        if (allowed) edges.emplace_back(i, r);
      }
    }
    return assign_with_demands(inst.num_agents(), r_count, edges, n);
  };

  std::vector<Block> blocks;
  std::vector<char> required(k, 1);
  // Decide pairs in order, trying "not required" first; undecided pairs count
  // as required, so a failed matching prunes the whole subtree.
  auto search = [&](auto&& self, int p) -> void {
    if (p == k) {
      auto witness = assignment_for(required);
      if (!witness) return;
      for (int q = 0; q < k; ++q) {
        if (!required[q]) continue;
        required[q] = 0;
        const bool still_feasible = assignment_for(required).has_value();
        required[q] = 1;
        if (still_feasible) return;
      }
      Block block{n, std::move(*witness), {}};
      for (int q = 0; q < k; ++q) {
        if (required[q]) block.rows.push_back(pairs[q]);
      }
      blocks.push_back(std::move(block));
      return;
    }
    required[p] = 0;
    if (assignment_for(required)) self(self, p + 1);
    required[p] = 1;
    self(self, p + 1);
  };
  if (assignment_for(required)) search(search, 0);
  return blocks;
}

Block profile_block(const Instance& inst, const ActionProfile& profile) {
  Block block{config_of_profile(inst, profile), profile, {}};
  for (int i = 0; i < inst.num_agents(); ++i) {
    for (int t : inst.action_set(i)) {
      if (t != profile[i]) block.rows.emplace_back(profile[i], t);
    }
  }
  std::sort(block.rows.begin(), block.rows.end());
  block.rows.erase(std::unique(block.rows.begin(), block.rows.end()), block.rows.end());
  return block;
}

PublicSignal finalize_signal(const Instance& inst, std::vector<double> emission,
                             const ActionProfile* witness, double cap) {
  PublicSignal signal;
  signal.emission = std::move(emission);
  for (int s = 0; s < inst.num_states(); ++s) {
    signal.probability += inst.prior_value(s) * signal.emission[s];
  }
  signal.posterior.resize(inst.num_states());
  for (int s = 0; s < inst.num_states(); ++s) {
    signal.posterior[s] = inst.prior_value(s) * signal.emission[s] / signal.probability;
  }
  const CostTable<double> costs =
      expected_cost_functions<double>(inst, std::span<const double>(signal.posterior));
  if (witness != nullptr && is_pure_ne(inst, costs, *witness)) {
    signal.recommended_assignment = *witness;
    signal.recommended_config = config_of_profile(inst, *witness);
  } else {
    NashResult<double> best = best_nash(inst, costs, cap);
    signal.recommended_assignment = std::move(best.assignment);
    signal.recommended_config = std::move(best.config);
  }
  signal.expected_cost = social_cost(costs, signal.recommended_config);
  return signal;
}

PublicSolution solve_blocks(const Instance& inst, const std::vector<Block>& blocks,
                            const SolveOptions& options) {
  const int states = inst.num_states();
  const int count = static_cast<int>(blocks.size());
  LPSpec spec;
  for (const Block& block : blocks) {
    for (int s = 0; s < states; ++s) spec.add_variable(state_social_cost(inst, s, block.config));
  }
  for (int b = 0; b < count; ++b) {
    for (const auto& [from, to] : blocks[b].rows) {
      std::vector<LPTerm> terms;
      bool binding = false;
      for (int s = 0; s < states; ++s) {
        const double c = deviation_coefficient(inst, s, blocks[b].config, from, to);
        if (c == 0) continue;
        terms.push_back({b * states + s, c});
        binding = binding || c > 0;
      }
      // Rows with no positive coefficient hold for every y >= 0.
      if (binding) spec.add_less_equal(std::move(terms), 0.0);
    }
  }
  for (int s = 0; s < states; ++s) {
    std::vector<LPTerm> terms;
    for (int b = 0; b < count; ++b) terms.push_back({b * states + s, 1.0});
    spec.add_equal(std::move(terms), inst.prior_value(s));
  }
  const LPSolution solution = solve_lp(spec, options.lp);
  if (solution.status != LPStatus::kOptimal) {
    // The full-information split always lies in the feasible region.
    throw Error(ErrorKind::kNumericalFailure,
                std::string("public signaling program reported ") + to_string(solution.status));
  }

  std::vector<int> kept;
  std::vector<std::vector<double>> emission;
  for (int b = 0; b < count; ++b) {
    double mass = 0;
    for (int s = 0; s < states; ++s) mass += std::max(0.0, solution.x[b * states + s]);
    if (mass < kSignalFloor) continue;
    std::vector<double> row(states, 0.0);
    for (int s = 0; s < states; ++s) {
      if (inst.prior_value(s) > 0) {
        row[s] = std::max(0.0, solution.x[b * states + s]) / inst.prior_value(s);
      }
    }
    kept.push_back(b);
    emission.push_back(std::move(row));
  }
  for (int s = 0; s < states; ++s) {
    double total = 0;
    for (const auto& row : emission) total += row[s];
    if (total > 0) {
      for (auto& row : emission) row[s] /= total;
    } else if (!emission.empty()) {
      emission.front()[s] = 1.0;
    }
  }

  PublicSolution result;
  result.blocks = count;
  result.lp_value = solution.objective;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    PublicSignal signal = finalize_signal(inst, std::move(emission[k]),
                                          &blocks[kept[k]].witness,
                                          options.limits.configurations);
    if (signal.probability < kSignalFloor) continue;
    result.value += signal.probability * signal.expected_cost;
    result.scheme.signals.push_back(std::move(signal));
  }
  return result;
}

}  // namespace

double state_social_cost(const Instance& inst, int state, const Configuration& n) {
  double total = 0;
  for (int r = 0; r < inst.num_resources(); ++r) {
    if (n[r] > 0) total += n[r] * inst.cost_value(state, r, n[r]);
  }
  return total;
}

PublicScheme make_public_scheme(const Instance& inst,
                                const std::vector<std::vector<double>>& emission, double cap) {
  PublicScheme scheme;
  for (const auto& row : emission) {
    if (static_cast<int>(row.size()) != inst.num_states()) {
      throw Error(ErrorKind::kDimensionMismatch, "emission row has wrong length");
    }
    double mass = 0;
    for (int s = 0; s < inst.num_states(); ++s) mass += inst.prior_value(s) * row[s];
    if (mass < kSignalFloor) continue;
    scheme.signals.push_back(finalize_signal(inst, row, nullptr, cap));
  }
  return scheme;
}

void validate_public_scheme(const Instance& inst, const PublicScheme& scheme, double tol) {
  const int states = inst.num_states();
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kInvalidScheme, what); };
  if (scheme.signals.empty()) fail("scheme has no signals");
  std::vector<double> emitted(states, 0.0);
  std::vector<double> recovered(states, 0.0);
  for (std::size_t k = 0; k < scheme.signals.size(); ++k) {
    const PublicSignal& signal = scheme.signals[k];
    const std::string where = "signals[" + std::to_string(k) + "]";
    if (static_cast<int>(signal.emission.size()) != states ||
        static_cast<int>(signal.posterior.size()) != states) {
      fail(where + " has vectors of the wrong length");
    }
    double probability = 0;
    double posterior_total = 0;
    for (int s = 0; s < states; ++s) {
      if (signal.emission[s] < -tol || signal.posterior[s] < -tol) {
        fail(where + " has a negative probability");
      }
      probability += inst.prior_value(s) * signal.emission[s];
      posterior_total += signal.posterior[s];
      emitted[s] += signal.emission[s];
    }
    if (std::abs(probability - signal.probability) > tol) {
      fail(where + ".probability disagrees with the emissions");
    }
    if (std::abs(posterior_total - 1) > tol) fail(where + ".posterior does not sum to 1");
    for (int s = 0; s < states; ++s) {
      if (std::abs(signal.posterior[s] * probability -
                   inst.prior_value(s) * signal.emission[s]) > tol) {
        fail(where + ".posterior violates Bayes' rule at state " + inst.state_name(s));
      }
      recovered[s] += probability * signal.posterior[s];
    }
    if (static_cast<int>(signal.recommended_assignment.size()) != inst.num_agents()) {
      fail(where + ".recommended_assignment has the wrong length");
    }
    Configuration n;
    try {
      n = config_of_profile(inst, signal.recommended_assignment);
    } catch (const Error& e) {
      fail(where + ".recommended_assignment: " + e.what());
    }
    if (n != signal.recommended_config) {
      fail(where + ".recommended_config does not match the assignment");
    }
    const CostTable<double> costs =
        expected_cost_functions<double>(inst, std::span<const double>(signal.posterior));
    if (!is_pure_ne(inst, costs, signal.recommended_assignment)) {
      fail(where + " recommends a profile that is not a pure NE at its posterior");
    }
  }
  for (int s = 0; s < states; ++s) {
    if (std::abs(emitted[s] - 1) > tol) {
      fail("emissions in state " + inst.state_name(s) + " sum to " +
           format_double(emitted[s]));
    }
    if (std::abs(recovered[s] - inst.prior_value(s)) > tol) {
      fail("posteriors do not average to the prior at state " + inst.state_name(s));
    }
  }
}

double evaluate_public_scheme(const Instance& inst, const PublicScheme& scheme,
                              Selection selection, double cap) {
  validate_public_scheme(inst, scheme);
  double total = 0;
  for (const PublicSignal& signal : scheme.signals) {
    const CostTable<double> costs =
        expected_cost_functions<double>(inst, std::span<const double>(signal.posterior));
    const NashResult<double> ne = selection == Selection::kBest ? best_nash(inst, costs, cap)
                                                                : worst_nash(inst, costs, cap);
    total += signal.probability * ne.cost;
  }
  return total;
}

PublicScheme full_info_scheme(const Instance& inst) {
  std::vector<std::vector<double>> emission;
  for (int s = 0; s < inst.num_states(); ++s) {
    std::vector<double> row(inst.num_states(), 0.0);
    row[s] = 1.0;
    emission.push_back(std::move(row));
  }
  return make_public_scheme(inst, emission);
}

PublicScheme no_info_scheme(const Instance& inst) {
  return make_public_scheme(inst, {std::vector<double>(inst.num_states(), 1.0)});
}

std::optional<WeightedPosterior> per_profile_lp(const Instance& inst,
                                                std::span<const double> weights,
                                                const ActionProfile& profile,
                                                const LPOptions& lp) {
  check_weights(inst, weights);
  const Block block = profile_block(inst, profile);
  std::vector<std::pair<std::vector<double>, int>> rows;
  for (const auto& [from, to] : block.rows) {
    rows.emplace_back(coefficient_row(inst, block.config, from, to), +1);
  }
  return solve_posterior_lp(inst, weights, block.config, rows, lp);
}

std::optional<WeightedPosterior> per_signature_lp(const Instance& inst,
                                                  std::span<const double> weights,
                                                  const Signature& sig, const LPOptions& lp) {
  check_weights(inst, weights);
  const Configuration& n = sig.config();
  std::vector<std::pair<std::vector<double>, int>> rows;
  for (int r = 0; r < inst.num_resources(); ++r) {
    for (int t = 0; t < inst.num_resources(); ++t) {
      if (t == r || n[t] >= inst.num_agents()) continue;
      rows.emplace_back(coefficient_row(inst, n, r, t),
                        sig.label(r, t) == Label::kLE ? +1 : -1);
    }
  }
  return solve_posterior_lp(inst, weights, n, rows, lp);
}

BestWeightedPosterior best_weighted_posterior(const Instance& inst,
                                              std::span<const double> weights,
                                              const SolveOptions& options) {
  check_weights(inst, weights);
  const int n_agents = inst.num_agents();
  const int r_count = inst.num_resources();
  const double guard =
      std::pow(static_cast<double>(n_agents), r_count) * std::pow(2.0, r_count * (r_count - 1));
  if (guard > options.limits.signatures) {
    throw Error(ErrorKind::kSizeGuard, "signature count bound " + format_double(guard) +
                                           " exceeds the cap " +
                                           format_double(options.limits.signatures));
  }

  std::optional<BestWeightedPosterior> best;
  for (const Configuration& n : enumerate_configurations(inst, options.limits.configurations)) {
    Signature sig(n);
    std::vector<std::pair<int, int>> free_pairs;
    for (int r = 0; r < r_count; ++r) {
      for (int t = 0; t < r_count; ++t) {
        if (t == r) continue;
        if (n[t] >= n_agents) {
          sig.set_label(r, t, Label::kGT);
        } else if (n[r] > 0) {
          free_pairs.emplace_back(r, t);
        }
      }
    }
    const int k = static_cast<int>(free_pairs.size());
    for (long mask = 0; mask < (1L << k); ++mask) {
      bool contradictory = false;
      for (int p = 0; p < k; ++p) {
        const auto [r, t] = free_pairs[p];
        const Label label = (mask >> (k - 1 - p)) & 1 ? Label::kGT : Label::kLE;
        sig.set_label(r, t, label);
      }
      for (const auto& [r, t] : free_pairs) {
        if (n[t] > 0 && sig.label(r, t) == Label::kGT && sig.label(t, r) == Label::kGT) {
          contradictory = true;
        }
      }
      if (contradictory || !find_obeying_assignment(inst, sig)) continue;
      auto candidate = per_signature_lp(inst, weights, sig, options.lp);
      if (!candidate) continue;
      if (!best || candidate->objective < best->objective - 1e-12) {
        best = BestWeightedPosterior{std::move(candidate->posterior), sig, candidate->objective};
      }
    }
  }
  if (!best) throw Error(ErrorKind::kNumericalFailure, "no signature region is feasible");
  return *best;
}

std::vector<ActionProfile> enumerate_profiles(const Instance& inst, double cap) {
  double total = 1;
  for (int i = 0; i < inst.num_agents(); ++i) total *= inst.action_set(i).size();
  if (total > cap) {
    throw Error(ErrorKind::kSizeGuard, format_double(total) +
                                           " action profiles exceed the cap " +
                                           format_double(cap));
  }
  std::vector<ActionProfile> out;
  ActionProfile current(inst.num_agents());
  auto recurse = [&](auto&& self, int agent) -> void {
    if (agent == inst.num_agents()) {
      out.push_back(current);
      return;
    }
    for (int r : inst.action_set(agent)) {
      current[agent] = r;
      self(self, agent + 1);
    }
  };
  recurse(recurse, 0);
  return out;
}

PublicSolution solve_optimal_public(const Instance& inst, const SolveOptions& options) {
  const std::vector<Configuration> configs =
      enumerate_configurations(inst, options.limits.configurations);
  std::vector<std::vector<Block>> per_config(configs.size());
  parallel_for(static_cast<int>(configs.size()), options.threads,
               [&](int k) { per_config[k] = minimal_blocks(inst, configs[k]); });
  std::vector<Block> blocks;
  for (auto& group : per_config) {
    for (Block& block : group) blocks.push_back(std::move(block));
    if (static_cast<double>(blocks.size()) > options.limits.signatures) {
      throw Error(ErrorKind::kSizeGuard, "posterior regions exceed the cap " +
                                             format_double(options.limits.signatures));
    }
  }
  return solve_blocks(inst, blocks, options);
}

PublicSolution solve_public_by_profiles(const Instance& inst, const SolveOptions& options) {
  std::vector<Block> blocks;
  for (const ActionProfile& profile : enumerate_profiles(inst, options.limits.profiles)) {
    blocks.push_back(profile_block(inst, profile));
  }
  return solve_blocks(inst, blocks, options);
}

}  // namespace scg
