#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <cstdint>

#include "scg/error.hpp"
#include "scg/lp.hpp"

namespace scg {

int LPSpec::add_variable(double cost) {
  objective.push_back(cost);
  if (!nonnegative.empty()) nonnegative.push_back(1);
  return num_vars++;
}

void LPSpec::add_less_equal(std::vector<LPTerm> terms, double rhs) {
  less_equal.push_back({std::move(terms), rhs});
}

void LPSpec::add_greater_equal(std::vector<LPTerm> terms, double rhs) {
  for (LPTerm& t : terms) t.coef = -t.coef;
  less_equal.push_back({std::move(terms), -rhs});
}

void LPSpec::add_equal(std::vector<LPTerm> terms, double rhs) {
  equal.push_back({std::move(terms), rhs});
}

const char* to_string(LPStatus status) {
  switch (status) {
    case LPStatus::kOptimal:
      return "Optimal";
    case LPStatus::kInfeasible:
      return "Infeasible";
    case LPStatus::kUnbounded:
      return "Unbounded";
  }
  return "Unknown";
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr int kDegenerateStreakForBland = 30;

// Deterministic value in [0, 1) per column (splitmix64 finalizer).
double hash_unit(int column) {
  std::uint64_t z = static_cast<std::uint64_t>(column) + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

[[noreturn]] void numerical_failure(const std::string& what) {
  throw Error(ErrorKind::kNumericalFailure, "simplex: " + what);
}

// Standard form  A x = b, x >= 0, b >= 0  with columns ordered structural,
// slack, artificial. Free variables are split into a +/- pair.
class RevisedSimplex {
 public:
  RevisedSimplex(const LPSpec& spec, const LPOptions& options)
      : spec_(spec), options_(options) {
    build_standard_form();
  }

  LPSolution run();

 private:
  struct Eta {
    int row;
    double pivot;
    std::vector<std::pair<int, double>> entries;
  };

  enum class Outcome { kOptimal, kUnbounded };

  void build_standard_form();
  void refactor();
  Eigen::VectorXd ftran(Eigen::VectorXd v) const;
  Eigen::VectorXd btran(Eigen::VectorXd v) const;
  Eigen::VectorXd column(int j) const;
  double column_dot(int j, const Eigen::VectorXd& z) const;
  Outcome iterate(const std::vector<double>& cost, bool phase_two);
  void pivot(int row, int entering, const Eigen::VectorXd& d, double theta);
  void drive_out_artificials();
  bool restore_primal_feasibility();
  void count_iteration();
  std::vector<double> extract_solution() const;

  const LPSpec& spec_;
  LPOptions options_;

  int rows_ = 0;
  int total_columns_ = 0;
  int first_artificial_ = 0;
  SparseMatrix a_;
  Eigen::VectorXd b_;           // rhs currently being solved (possibly shifted)
  Eigen::VectorXd b_original_;
  std::vector<double> phase_one_cost_;
  std::vector<double> phase_two_cost_;
  std::vector<int> positive_column_;
  std::vector<int> negative_column_;

  std::vector<int> basis_;
  std::vector<int> position_;
  Eigen::VectorXd xb_;
  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  long iterations_ = 0;
  long max_iterations_ = 0;
};

void RevisedSimplex::build_standard_form() {
  const int le_rows = static_cast<int>(spec_.less_equal.size());
  rows_ = le_rows + static_cast<int>(spec_.equal.size());
  if (static_cast<int>(spec_.objective.size()) != spec_.num_vars ||
      (!spec_.nonnegative.empty() &&
       static_cast<int>(spec_.nonnegative.size()) != spec_.num_vars)) {
    throw Error(ErrorKind::kDimensionMismatch, "LP objective/bounds size mismatch");
  }

  int next = 0;
  positive_column_.assign(spec_.num_vars, -1);
  negative_column_.assign(spec_.num_vars, -1);
  for (int j = 0; j < spec_.num_vars; ++j) {
    positive_column_[j] = next++;
    if (!spec_.is_nonnegative(j)) negative_column_[j] = next++;
  }
  const int structural = next;

  // Shifting every column's lower bound to -delta_j is the same as solving
  // with rhs b + A delta; a generic delta removes the ties behind degenerate
  // pivots. The shift is undone before the answer is reported.
  auto shift = [&](int column) {
    return options_.perturbation > 0 ? options_.perturbation * (1.0 + hash_unit(column)) : 0.0;
  };
  std::vector<double> sign(rows_, 1.0);
  b_.resize(rows_);
  b_original_.resize(rows_);
  auto row_at = [&](int i) -> const LPRow& {
    return i < le_rows ? spec_.less_equal[i] : spec_.equal[i - le_rows];
  };
  for (int i = 0; i < rows_; ++i) {
    const LPRow& row = row_at(i);
    if (!std::isfinite(row.rhs)) {
      throw Error(ErrorKind::kDimensionMismatch, "non-finite LP rhs");
    }
    double shifted = row.rhs;
    for (const LPTerm& t : row.terms) {
      if (t.var < 0 || t.var >= spec_.num_vars) continue;
      shifted += t.coef * shift(positive_column_[t.var]);
      if (negative_column_[t.var] >= 0) shifted -= t.coef * shift(negative_column_[t.var]);
    }
    if (i < le_rows) shifted += shift(structural + i);
    if (shifted < 0) sign[i] = -1.0;
    b_[i] = sign[i] * shifted;
    b_original_[i] = sign[i] * row.rhs;
  }

  std::vector<Eigen::Triplet<double, int>> triplets;
  for (int i = 0; i < rows_; ++i) {
    for (const LPTerm& t : row_at(i).terms) {
      if (t.var < 0 || t.var >= spec_.num_vars) {
        throw Error(ErrorKind::kDimensionMismatch, "LP term references unknown variable");
      }
      if (t.coef == 0) continue;
      triplets.emplace_back(i, positive_column_[t.var], sign[i] * t.coef);
      if (negative_column_[t.var] >= 0) {
        triplets.emplace_back(i, negative_column_[t.var], -sign[i] * t.coef);
      }
    }
  }

  // Slacks, then artificials for rows lacking a +1 slack.
  basis_.assign(rows_, -1);
  int column_index = structural;
  for (int i = 0; i < le_rows; ++i) {
    triplets.emplace_back(i, column_index, sign[i]);
    if (sign[i] > 0) basis_[i] = column_index;
    ++column_index;
  }
  first_artificial_ = column_index;
  for (int i = 0; i < rows_; ++i) {
    if (basis_[i] >= 0) continue;
    triplets.emplace_back(i, column_index, 1.0);
    basis_[i] = column_index++;
  }
  total_columns_ = column_index;

  a_.resize(rows_, total_columns_);
  a_.setFromTriplets(triplets.begin(), triplets.end());
  a_.makeCompressed();

  phase_one_cost_.assign(total_columns_, 0.0);
  for (int j = first_artificial_; j < total_columns_; ++j) phase_one_cost_[j] = 1.0;
  phase_two_cost_.assign(total_columns_, 0.0);
  for (int j = 0; j < spec_.num_vars; ++j) {
    phase_two_cost_[positive_column_[j]] = spec_.objective[j];
    if (negative_column_[j] >= 0) phase_two_cost_[negative_column_[j]] = -spec_.objective[j];
  }

  position_.assign(total_columns_, -1);
  for (int i = 0; i < rows_; ++i) position_[basis_[i]] = i;

  max_iterations_ = options_.max_iterations > 0
                        ? options_.max_iterations
                        : 20L * (rows_ + total_columns_) + 10000L;
}

void RevisedSimplex::refactor() {
  SparseMatrix basis_matrix(rows_, rows_);
  std::vector<Eigen::Triplet<double, int>> triplets;
  for (int i = 0; i < rows_; ++i) {
    for (SparseMatrix::InnerIterator it(a_, basis_[i]); it; ++it) {
      triplets.emplace_back(static_cast<int>(it.row()), i, it.value());
    }
  }
  basis_matrix.setFromTriplets(triplets.begin(), triplets.end());
  basis_matrix.makeCompressed();
  lu_.analyzePattern(basis_matrix);
  lu_.factorize(basis_matrix);
  if (lu_.info() != Eigen::Success) numerical_failure("singular basis");
  etas_.clear();
  xb_ = lu_.solve(b_);
}

Eigen::VectorXd RevisedSimplex::column(int j) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(rows_);
  for (SparseMatrix::InnerIterator it(a_, j); it; ++it) v[it.row()] = it.value();
  return v;
}

double RevisedSimplex::column_dot(int j, const Eigen::VectorXd& z) const {
  double total = 0;
  for (SparseMatrix::InnerIterator it(a_, j); it; ++it) total += it.value() * z[it.row()];
  return total;
}

Eigen::VectorXd RevisedSimplex::ftran(Eigen::VectorXd v) const {
  Eigen::VectorXd y = lu_.solve(v);
  for (const Eta& eta : etas_) {
    const double yr = y[eta.row] / eta.pivot;
    if (yr != 0) {
      for (const auto& [i, di] : eta.entries) y[i] -= di * yr;
    }
    y[eta.row] = yr;
  }
  return y;
}

Eigen::VectorXd RevisedSimplex::btran(Eigen::VectorXd v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double total = v[it->row];
    for (const auto& [i, di] : it->entries) total -= di * v[i];
    v[it->row] = total / it->pivot;
  }
  return lu_.transpose().solve(v);
}

void RevisedSimplex::count_iteration() {
  if (++iterations_ > max_iterations_) {
    numerical_failure("iteration limit of " + std::to_string(max_iterations_) +
                      " reached");
  }
}

void RevisedSimplex::pivot(int row, int entering, const Eigen::VectorXd& d, double theta) {
  if (theta != 0) {
    xb_ -= theta * d;
  }
  xb_[row] = theta;
  position_[basis_[row]] = -1;
  basis_[row] = entering;
  position_[entering] = row;

  Eta eta{row, d[row], {}};
  for (int i = 0; i < rows_; ++i) {
    if (i != row && std::abs(d[i]) > 1e-14) eta.entries.emplace_back(i, d[i]);
  }
  etas_.push_back(std::move(eta));
  if (static_cast<int>(etas_.size()) >= options_.refactor_interval) refactor();
}

RevisedSimplex::Outcome RevisedSimplex::iterate(const std::vector<double>& cost,
                                                bool phase_two) {
  const double ptol = options_.primal_tolerance;
  const double dtol = options_.dual_tolerance;
  const double pivtol = options_.pivot_tolerance;
  int degenerate_streak = 0;
  Eigen::VectorXd cb(rows_);
  std::vector<double> weight(total_columns_, 1.0);

  while (true) {
    for (int i = 0; i < rows_; ++i) cb[i] = cost[basis_[i]];
    const Eigen::VectorXd z = btran(cb);
    const bool bland = degenerate_streak >= kDegenerateStreakForBland;

    int entering = -1;
    double best_score = 0;
    for (int j = 0; j < first_artificial_; ++j) {
      if (position_[j] >= 0) continue;
      const double reduced = cost[j] - column_dot(j, z);
      if (reduced >= -dtol) continue;
      if (bland) {
        entering = j;
        break;
      }
      const double score = reduced * reduced / weight[j];
      if (score > best_score) {
        entering = j;
        best_score = score;
      }
    }
    if (entering < 0) return Outcome::kOptimal;

    const Eigen::VectorXd d = ftran(column(entering));

    // A basic artificial in phase two is a variable fixed at zero, so it
    // blocks movement in either direction.
    auto blocks = [&](int i) {
      if (phase_two && basis_[i] >= first_artificial_) return std::abs(d[i]) > pivtol;
      return d[i] > pivtol;
    };
    auto exact_ratio = [&](int i) { return std::max(0.0, xb_[i] / d[i]); };

    int leave = -1;
    if (bland) {
      double min_ratio = kInfinity;
      for (int i = 0; i < rows_; ++i) {
        if (blocks(i)) min_ratio = std::min(min_ratio, exact_ratio(i));
      }
      for (int i = 0; i < rows_; ++i) {
        if (!blocks(i) || exact_ratio(i) > min_ratio + 1e-15) continue;
        if (leave < 0 || basis_[i] < basis_[leave]) leave = i;
      }
    } else {
      // Harris two-pass ratio test.
      double bound = kInfinity;
      for (int i = 0; i < rows_; ++i) {
        if (!blocks(i)) continue;
        const double slack = phase_two && basis_[i] >= first_artificial_
                                 ? std::abs(xb_[i])
                                 : std::max(0.0, xb_[i]);
        bound = std::min(bound, (slack + ptol) / std::abs(d[i]));
      }
      double largest = 0;
      for (int i = 0; i < rows_; ++i) {
        if (!blocks(i)) continue;
        if (exact_ratio(i) <= bound && std::abs(d[i]) > largest) {
          largest = std::abs(d[i]);
          leave = i;
        }
      }
    }
    if (leave < 0) {
      if (phase_two) return Outcome::kUnbounded;
      numerical_failure("unbounded phase-one problem");
    }

    const double theta = exact_ratio(leave);
    // Devex reference weights, updated from the pivot row.
    const double alpha_q = d[leave];
    const double weight_q = weight[entering];
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(rows_);
    unit[leave] = 1.0;
    const Eigen::VectorXd rho = btran(unit);
    double largest_weight = 0;
    for (int j = 0; j < first_artificial_; ++j) {
      if (position_[j] >= 0 || j == entering) continue;
      const double ratio = column_dot(j, rho) / alpha_q;
      if (ratio != 0) weight[j] = std::max(weight[j], ratio * ratio * weight_q);
      largest_weight = std::max(largest_weight, weight[j]);
    }
    const int leaving_column = basis_[leave];
    if (leaving_column < first_artificial_) {
      weight[leaving_column] = std::max(weight_q / (alpha_q * alpha_q), 1.0);
    }
    if (largest_weight > 1e6) std::fill(weight.begin(), weight.end(), 1.0);

    count_iteration();
    pivot(leave, entering, d, theta);
    degenerate_streak = theta < 1e-12 ? degenerate_streak + 1 : 0;
  }
}

void RevisedSimplex::drive_out_artificials() {
  for (int row = 0; row < rows_; ++row) {
    if (basis_[row] < first_artificial_) continue;
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(rows_);
    unit[row] = 1.0;
    const Eigen::VectorXd rho = btran(unit);
    int entering = -1;
    double largest = 1e-7;
    for (int j = 0; j < first_artificial_; ++j) {
      if (position_[j] >= 0) continue;
      const double alpha = std::abs(column_dot(j, rho));
      if (alpha > largest) {
        largest = alpha;
        entering = j;
      }
    }
    if (entering < 0) continue;  // redundant row; the artificial stays at zero
    const Eigen::VectorXd d = ftran(column(entering));
    count_iteration();
    pivot(row, entering, d, xb_[row] / d[row]);
  }
}

// Dual simplex passes on an optimal basis whose values went slightly out of
// bounds when the rhs shift was removed. Returns false when a violated row
// admits no entering column, i.e. the unshifted problem is infeasible.
bool RevisedSimplex::restore_primal_feasibility() {
  const double ptol = options_.primal_tolerance;
  const double dtol = options_.dual_tolerance;
  const double pivtol = options_.pivot_tolerance;
  Eigen::VectorXd cb(rows_);
  while (true) {
    int leave = -1;
    double worst = ptol;
    for (int i = 0; i < rows_; ++i) {
      const double violation = basis_[i] >= first_artificial_ ? std::abs(xb_[i]) : -xb_[i];
      if (violation > worst) {
        worst = violation;
        leave = i;
      }
    }
    if (leave < 0) return true;

    for (int i = 0; i < rows_; ++i) cb[i] = phase_two_cost_[basis_[i]];
    const Eigen::VectorXd z = btran(cb);
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(rows_);
    unit[leave] = 1.0;
    const Eigen::VectorXd rho = btran(unit);
    const bool raise = xb_[leave] < 0;

    std::vector<std::pair<int, double>> candidates;  // (column, alpha)
    double bound = kInfinity;
    for (int j = 0; j < first_artificial_; ++j) {
      if (position_[j] >= 0) continue;
      const double alpha = column_dot(j, rho);
      if (raise ? alpha >= -pivtol : alpha <= pivtol) continue;
      const double reduced = phase_two_cost_[j] - column_dot(j, z);
      bound = std::min(bound, (std::max(0.0, reduced) + dtol) / std::abs(alpha));
      candidates.emplace_back(j, alpha);
    }
    if (candidates.empty()) return false;
    int entering = -1;
    double largest = 0;
    for (const auto& [j, alpha] : candidates) {
      const double reduced = phase_two_cost_[j] - column_dot(j, z);
      if (std::max(0.0, reduced) / std::abs(alpha) <= bound && std::abs(alpha) > largest) {
        largest = std::abs(alpha);
        entering = j;
      }
    }
    const Eigen::VectorXd d = ftran(column(entering));
    if (std::abs(d[leave]) <= pivtol) numerical_failure("unstable dual pivot");
    count_iteration();
    pivot(leave, entering, d, xb_[leave] / d[leave]);
  }
}

std::vector<double> RevisedSimplex::extract_solution() const {
  std::vector<double> column_values(total_columns_, 0.0);
  for (int i = 0; i < rows_; ++i) column_values[basis_[i]] = std::max(0.0, xb_[i]);
  std::vector<double> x(spec_.num_vars, 0.0);
  for (int j = 0; j < spec_.num_vars; ++j) {
    x[j] = column_values[positive_column_[j]];
    if (negative_column_[j] >= 0) x[j] -= column_values[negative_column_[j]];
  }
  return x;
}

LPSolution RevisedSimplex::run() {
  LPSolution solution;
  if (rows_ == 0) {
    for (int j = 0; j < spec_.num_vars; ++j) {
      const double c = spec_.objective[j];
      if (c < 0 || (c != 0 && !spec_.is_nonnegative(j))) {
        solution.status = LPStatus::kUnbounded;
        return solution;
      }
    }
    solution.status = LPStatus::kOptimal;
    solution.x.assign(spec_.num_vars, 0.0);
    return solution;
  }

  refactor();
  if (first_artificial_ < total_columns_) {
    iterate(phase_one_cost_, false);
    refactor();
    double infeasibility = 0;
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] >= first_artificial_) infeasibility += std::max(0.0, xb_[i]);
    }
    const double scale = std::max(1.0, b_.lpNorm<Eigen::Infinity>());
    if (infeasibility > options_.feasibility_tolerance * scale) {
      solution.status = LPStatus::kInfeasible;
      solution.iterations = iterations_;
      return solution;
    }
    drive_out_artificials();
  }

  if (iterate(phase_two_cost_, true) == Outcome::kUnbounded) {
    solution.status = LPStatus::kUnbounded;
    solution.iterations = iterations_;
    return solution;
  }
  if (options_.perturbation > 0) {
    b_ = b_original_;
    refactor();
    if (!restore_primal_feasibility()) {
      solution.status = LPStatus::kInfeasible;
      solution.iterations = iterations_;
      return solution;
    }
    // Dual pivots keep reduced costs within tolerance; this pass only
    // polishes what rounding left behind.
    if (iterate(phase_two_cost_, true) == Outcome::kUnbounded) {
      solution.status = LPStatus::kUnbounded;
      solution.iterations = iterations_;
      return solution;
    }
  }
  refactor();
  solution.status = LPStatus::kOptimal;
  solution.x = extract_solution();
  solution.iterations = iterations_;
  for (int j = 0; j < spec_.num_vars; ++j) solution.objective += spec_.objective[j] * solution.x[j];

  const double residual = max_residual(spec_, solution.x);
  if (!(residual <= options_.feasibility_tolerance)) {
    numerical_failure("optimal basis violates constraints by " + std::to_string(residual));
  }
  return solution;
}

}  // namespace

LPSolution solve_lp(const LPSpec& spec, const LPOptions& options) {
  RevisedSimplex simplex(spec, options);
  return simplex.run();
}

}  // namespace scg
