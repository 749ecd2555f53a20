#include "scg/equilibrium.hpp"

#include <string>

#include "scg/error.hpp"
#include "scg/flow.hpp"

namespace scg {

Signature::Signature(Configuration n)
    : config_(std::move(n)), labels_(config_.size() * config_.size(), Label::kLE) {}

std::vector<std::pair<int, int>> allowable_edges(const Instance& inst, const Signature& sig) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < inst.num_agents(); ++i) {
    for (int r : inst.action_set(i)) {
      if (sig.config()[r] == 0) continue;
      bool allowed = true;
      for (int target : inst.action_set(i)) {
        if (target != r && sig.label(r, target) == Label::kGT) {
          allowed = false;
          break;
        }
      }
      if (allowed) edges.emplace_back(i, r);
    }
  }
  return edges;
}

std::optional<ActionProfile> find_obeying_assignment(const Instance& inst,
                                                     const Signature& sig) {
  const auto edges = allowable_edges(inst, sig);
  return assign_with_demands(inst.num_agents(), inst.num_resources(), edges, sig.config());
}

template <typename T>
std::vector<NashResult<T>> nash_configurations(const Instance& inst, const CostTable<T>& costs,
                                               double cap) {
  std::vector<NashResult<T>> out;
  for (Configuration& n : enumerate_configurations(inst, cap)) {
    auto assignment = find_obeying_assignment(inst, signature_of(costs, n));
    if (!assignment) continue;
    T cost = social_cost(costs, n);
    out.push_back({std::move(n), std::move(*assignment), std::move(cost)});
  }
  return out;
}

namespace {

template <typename T, typename Better>
NashResult<T> select_nash(const Instance& inst, const CostTable<T>& costs, double cap,
                          Better better) {
  std::optional<NashResult<T>> chosen;
  for (Configuration& n : enumerate_configurations(inst, cap)) {
    T cost = social_cost(costs, n);
    if (chosen && !better(cost, chosen->cost)) continue;
    auto assignment = find_obeying_assignment(inst, signature_of(costs, n));
    if (!assignment) continue;
    chosen = NashResult<T>{std::move(n), std::move(*assignment), std::move(cost)};
  }
  if (!chosen) {
    // Rosenthal guarantees existence; reaching this means the cost table is
    // not monotone or the tolerance policy is broken.
    throw Error(ErrorKind::kNumericalFailure, "no pure Nash equilibrium found");
  }
  return *chosen;
}

}  // namespace

template <typename T>
NashResult<T> best_nash(const Instance& inst, const CostTable<T>& costs, double cap) {
  return select_nash(inst, costs, cap, [](const T& a, const T& b) { return a < b; });
}

template <typename T>
NashResult<T> worst_nash(const Instance& inst, const CostTable<T>& costs, double cap) {
  return select_nash(inst, costs, cap, [](const T& a, const T& b) { return a > b; });
}

template <typename T>
BestResponseRun<T> best_response_dynamics(const Instance& inst, const CostTable<T>& costs,
                                          ActionProfile start, long max_rounds) {
  BestResponseRun<T> run;
  Configuration n = config_of_profile(inst, start);
  run.profile = std::move(start);
  run.potentials.push_back(potential(costs, n));
  for (long round = 0;; ++round) {
    int mover = -1;
    int destination = -1;
    for (int i = 0; i < inst.num_agents() && mover < 0; ++i) {
      const int r = run.profile[i];
      const T& current = costs.at(r, n[r]);
      std::optional<T> best_cost;
      for (int target : inst.action_set(i)) {
        if (target == r) continue;
        const T& candidate = costs.at(target, n[target] + 1);
        if (!best_cost || candidate < *best_cost) {
          best_cost = candidate;
          destination = target;
        }
      }
      if (best_cost && definitely_less(*best_cost, current)) mover = i;
    }
    if (mover < 0) return run;
    if (round >= max_rounds) {
      throw Error(ErrorKind::kMaxRoundsExceeded,
                  "best-response dynamics did not converge in " +
                      std::to_string(max_rounds) + " moves");
    }
    --n[run.profile[mover]];
    ++n[destination];
    run.profile[mover] = destination;
    run.potentials.push_back(potential(costs, n));
  }
}

template std::vector<NashResult<Rational>> nash_configurations(const Instance&,
                                                               const CostTable<Rational>&,
                                                               double);
template std::vector<NashResult<double>> nash_configurations(const Instance&,
                                                             const CostTable<double>&, double);
template NashResult<Rational> best_nash(const Instance&, const CostTable<Rational>&, double);
template NashResult<double> best_nash(const Instance&, const CostTable<double>&, double);
template NashResult<Rational> worst_nash(const Instance&, const CostTable<Rational>&, double);
template NashResult<double> worst_nash(const Instance&, const CostTable<double>&, double);
template BestResponseRun<Rational> best_response_dynamics(const Instance&,
                                                          const CostTable<Rational>&,
                                                          ActionProfile, long);
template BestResponseRun<double> best_response_dynamics(const Instance&,
                                                        const CostTable<double>&,
                                                        ActionProfile, long);

}  // namespace scg
