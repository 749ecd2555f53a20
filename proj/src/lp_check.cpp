#include <algorithm>
#include <cmath>

#include "scg/lp.hpp"

namespace scg {

double max_residual(const LPSpec& spec, std::span<const double> x) {
  double worst = 0;
  auto row_value = [&](const LPRow& row) {
    double total = 0;
    for (const LPTerm& t : row.terms) total += t.coef * x[t.var];
    return total;
  };
  for (const LPRow& row : spec.less_equal) {
    worst = std::max(worst, row_value(row) - row.rhs);
  }
  for (const LPRow& row : spec.equal) {
    worst = std::max(worst, std::abs(row_value(row) - row.rhs));
  }
  for (int j = 0; j < spec.num_vars; ++j) {
    if (spec.is_nonnegative(j)) worst = std::max(worst, -x[j]);
    if (!std::isfinite(x[j])) return INFINITY;
  }
  return worst;
}

}  // namespace scg
