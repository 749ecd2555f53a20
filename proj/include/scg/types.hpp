#pragma once

#include <vector>

namespace scg {

// Per-resource agent counts n_r; entries sum to the number of agents.
using Configuration = std::vector<int>;

// a_i = resource index (0-based) chosen by agent i.
using ActionProfile = std::vector<int>;

// Default cap on the number of compositions of N into R parts that
// enumerate_configurations is willing to walk.
inline constexpr double kDefaultConfigurationCap = 1e7;

}  // namespace scg
