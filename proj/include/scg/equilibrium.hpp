#pragma once

#include <compare>
#include <optional>
#include <utility>
#include <vector>

#include "scg/core.hpp"

namespace scg {

enum class Label : unsigned char { kLE = 0, kGT = 1 };

// Configuration plus one deviation label per ordered pair (r, r'), r != r'.
// Labels are stored as a dense R x R matrix; the diagonal is unused.
class Signature {
 public:
  Signature() = default;
  explicit Signature(Configuration n);  // all labels LE

  const Configuration& config() const { return config_; }
  int num_resources() const { return static_cast<int>(config_.size()); }
  Label label(int from, int to) const { return labels_[from * num_resources() + to]; }
  void set_label(int from, int to, Label value) { labels_[from * num_resources() + to] = value; }
  int label_count() const { return num_resources() * (num_resources() - 1); }

  // Order: configuration lexicographically, then labels row-major (LE < GT).
  auto operator<=>(const Signature&) const = default;
  bool operator==(const Signature&) const = default;

 private:
  Configuration config_;
  std::vector<Label> labels_;
};

// Lambda(r, r') = LE iff C_r(n_r) <= C_r'(n_r' + 1) (ties LE). An empty
// resource contributes c_r(0) = 0 and so labels LE; pairs into a resource
// already holding all N agents are GT since C_r'(N + 1) does not exist.
template <typename T>
Signature signature_of(const CostTable<T>& costs, const Configuration& n) {
  const int r_count = costs.num_resources();
  const int n_agents = costs.num_agents();
  Signature sig(n);
  for (int r = 0; r < r_count; ++r) {
    for (int target = 0; target < r_count; ++target) {
      if (target == r) continue;
      Label value = Label::kLE;
      if (n[target] >= n_agents) {
        value = Label::kGT;
      } else if (n[r] > 0 &&
                 !approx_leq(costs.at(r, n[r]), costs.at(target, n[target] + 1))) {
        value = Label::kGT;
      }
      sig.set_label(r, target, value);
    }
  }
  return sig;
}

// Edges (i, r) with r in A_i and Lambda(r, r') = LE for every other r' in A_i.
std::vector<std::pair<int, int>> allowable_edges(const Instance& inst, const Signature& sig);

// Matches every agent along an allowable edge with resource r receiving
// exactly n_r agents, or nullopt when no such assignment exists.
std::optional<ActionProfile> find_obeying_assignment(const Instance& inst,
                                                     const Signature& sig);

template <typename T>
bool is_pure_ne(const Instance& inst, const CostTable<T>& costs, const ActionProfile& profile) {
  const Configuration n = config_of_profile(inst, profile);
  for (int i = 0; i < inst.num_agents(); ++i) {
    const int r = profile[i];
    for (int target : inst.action_set(i)) {
      if (target == r) continue;
      if (!approx_leq(costs.at(r, n[r]), costs.at(target, n[target] + 1))) return false;
    }
  }
  return true;
}

template <typename T>
struct NashResult {
  Configuration config;
  ActionProfile assignment;
  T cost = 0;
};

// Every configuration supporting a pure NE, with a witness assignment, in
// lexicographic configuration order.
template <typename T>
std::vector<NashResult<T>> nash_configurations(const Instance& inst, const CostTable<T>& costs,
                                               double cap = kDefaultConfigurationCap);

// Social-cost-minimizing / maximizing pure NE; ties go to the
// lexicographically smallest configuration.
template <typename T>
NashResult<T> best_nash(const Instance& inst, const CostTable<T>& costs,
                        double cap = kDefaultConfigurationCap);
template <typename T>
NashResult<T> worst_nash(const Instance& inst, const CostTable<T>& costs,
                         double cap = kDefaultConfigurationCap);

template <typename T>
struct BestResponseRun {
  ActionProfile profile;
  std::vector<T> potentials;  // potential before the first move and after each move
};

// Repeatedly moves the lowest-index agent that has a strictly improving
// deviation to its cheapest alternative (lowest index on ties). Throws
// MaxRoundsExceeded after max_rounds moves.
template <typename T>
BestResponseRun<T> best_response_dynamics(const Instance& inst, const CostTable<T>& costs,
                                          ActionProfile start, long max_rounds = 1000000);

extern template std::vector<NashResult<Rational>> nash_configurations(
    const Instance&, const CostTable<Rational>&, double);
extern template std::vector<NashResult<double>> nash_configurations(const Instance&,
                                                                    const CostTable<double>&,
                                                                    double);
extern template NashResult<Rational> best_nash(const Instance&, const CostTable<Rational>&,
                                               double);
extern template NashResult<double> best_nash(const Instance&, const CostTable<double>&, double);
extern template NashResult<Rational> worst_nash(const Instance&, const CostTable<Rational>&,
                                                double);
extern template NashResult<double> worst_nash(const Instance&, const CostTable<double>&, double);
extern template BestResponseRun<Rational> best_response_dynamics(const Instance&,
                                                                  const CostTable<Rational>&,
                                                                  ActionProfile, long);
extern template BestResponseRun<double> best_response_dynamics(const Instance&,
                                                               const CostTable<double>&,
                                                               ActionProfile, long);

}  // namespace scg
