#pragma once

#include <span>
#include <vector>

namespace scg {

struct LPTerm {
  int var;
  double coef;
};

struct LPRow {
  std::vector<LPTerm> terms;
  double rhs = 0;
};

// minimize objective . x  subject to
//   less_equal rows:  terms . x <= rhs
//   equal rows:       terms . x == rhs
//   x_j >= 0 where nonnegative[j] (all variables when the vector is empty).
struct LPSpec {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LPRow> less_equal;
  std::vector<LPRow> equal;
  std::vector<char> nonnegative;

  int add_variable(double cost);
  void add_less_equal(std::vector<LPTerm> terms, double rhs);
  // Stored as the negated <= row.
  void add_greater_equal(std::vector<LPTerm> terms, double rhs);
  void add_equal(std::vector<LPTerm> terms, double rhs);
  bool is_nonnegative(int var) const {
    return nonnegative.empty() || nonnegative[var] != 0;
  }
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LPStatus status);

struct LPSolution {
  LPStatus status = LPStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0;
  long iterations = 0;
};

struct LPOptions {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  // Residual ceiling checked on every Optimal answer.
  double feasibility_tolerance = 1e-7;
  long max_iterations = 0;  // 0: automatic, scaled with problem size
  int refactor_interval = 100;
  // Lower bounds are shifted to -perturbation * (1 + u_j), u_j in [0, 1),
  // while pivoting and restored before returning; 0 disables.
  double perturbation = 1e-6;
};

// Two-phase revised simplex on a sparse LU-factored basis. Deterministic for
// a fixed input. Throws Error(kNumericalFailure) when the iteration budget is
// exhausted, the basis turns singular, or an Optimal answer fails the
// residual check.
LPSolution solve_lp(const LPSpec& spec, const LPOptions& options = {});

// Largest constraint or sign violation of x, computed directly from the spec
// without touching solver state.
double max_residual(const LPSpec& spec, std::span<const double> x);

}  // namespace scg
