#pragma once

#include "scg/lp.hpp"
#include "scg/types.hpp"

namespace scg {

// Caps on enumerated object counts; exceeding one throws SizeGuard before any
// work is done.
struct SizeLimits {
  double configurations = kDefaultConfigurationCap;  // C(N+R-1, R-1)
  double signatures = 1e7;       // N^R * 2^(R(R-1))
  double profiles = 1e6;         // prod_i |A_i|
  double explicit_cells = 1e5;   // R^N * |Theta| for the exponential BCE program
  double reduced_cells = 1e7;    // |P(A)| * N * R * |Theta|
};

struct SolveOptions {
  int threads = 1;
  SizeLimits limits;
  LPOptions lp;
};

}  // namespace scg
