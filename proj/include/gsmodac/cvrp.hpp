#pragma once

#include <cstdint>
#include <vector>

#include "gsmodac/objective_vector.hpp"
#include "gsmodac/rng.hpp"

namespace gsmodac {

struct CvrpGenCfg {
  int min_demand = 1;
  int max_demand = 9;
  int capacity = 40;
};

struct Coord {
  double x = 0.0;
  double y = 0.0;
};

struct CvrpInstance {
  Coord depot;
  std::vector<Coord> coords;    // one per customer
  std::vector<int> demands;     // one per customer
  int capacity = 0;

  int num_customers() const { return static_cast<int>(coords.size()); }
  void validate() const;
};

CvrpInstance generate_cvrp(std::uint64_t seed, int num_customers,
                           const CvrpGenCfg& cfg = {});

using Route = std::vector<int>;  // customer indices in visiting order

// Greedy sequential split: walk the visiting order, starting a new route
// whenever the next customer would exceed capacity. Shared by the GA tour
// decoding and the PSO key decoding.
std::vector<Route> split_routes_by_capacity(const CvrpInstance& inst,
                                            const std::vector<int>& visit_order);

// Validates the partition and capacity constraints, then returns
// [D_total, D_max] with depot legs included in every route.
ObjectiveVector evaluate_cvrp(const CvrpInstance& inst, const std::vector<Route>& routes);

}  // namespace gsmodac
