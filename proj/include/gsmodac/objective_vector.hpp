#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace gsmodac {

// Objective vectors are all-minimize and fixed-length per problem
// configuration (2, 3 or 5 entries).
using ObjectiveVector = std::vector<double>;

inline bool all_finite(const ObjectiveVector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace gsmodac
