#pragma once

#include <span>
#include <vector>

#include "gsmodac/objective_vector.hpp"

namespace gsmodac {

// Exact hypervolume of the region dominated by `points` and bounded by the
// reference point `ref` (minimization). Points not strictly better than
// `ref` in every coordinate contribute nothing; dominated and duplicate
// input points do not change the result. 2D uses a staircase sweep, higher
// dimensions a WFG-style recursion over exclusive contributions.
double hypervolume(std::span<const ObjectiveVector> points,
                   const ObjectiveVector& ref);

// Mean over reference-front points of the minimum Euclidean distance to the
// candidate front.
double igd(std::span<const ObjectiveVector> front,
           std::span<const ObjectiveVector> reference_front);

// IGD with per-coordinate differences clamped at zero (dominance-compliant
// variant); igd_plus <= igd on all inputs.
double igd_plus(std::span<const ObjectiveVector> front,
                std::span<const ObjectiveVector> reference_front);

}  // namespace gsmodac
