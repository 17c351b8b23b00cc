#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gsmodac/objective_vector.hpp"

namespace gsmodac {

// True iff a <= b component-wise with at least one strict component
// (minimization). Throws std::invalid_argument on length mismatch.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

// Ranked fronts: fronts[0] is the non-dominated set, indices ascending
// within each front. fronts partition [0, n) and rank[i] gives the front
// index of population member i.
struct FrontPartition {
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> rank;
};

FrontPartition non_dominated_sort(std::span<const ObjectiveVector> points);

// Per-member crowding distance for one front. Boundary members get +inf,
// fronts of size <= 2 are all-inf, degenerate objectives contribute 0.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

}  // namespace gsmodac
