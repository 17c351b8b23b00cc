#include "gsmodac/cvrp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsmodac {

void CvrpInstance::validate() const {
  if (coords.empty() || coords.size() != demands.size()) {
    throw std::invalid_argument("cvrp instance: customer table mismatch");
  }
  if (capacity <= 0) throw std::invalid_argument("cvrp instance: nonpositive capacity");
  auto in_unit = [](const Coord& c) {
    return c.x >= 0.0 && c.x <= 1.0 && c.y >= 0.0 && c.y <= 1.0;
  };
  if (!in_unit(depot)) throw std::invalid_argument("cvrp instance: depot outside unit square");
  for (const auto& c : coords) {
    if (!in_unit(c)) throw std::invalid_argument("cvrp instance: customer outside unit square");
  }
  for (int d : demands) {
    if (d <= 0 || d > capacity) {
      throw std::invalid_argument("cvrp instance: demand outside (0, capacity]");
    }
  }
}

CvrpInstance generate_cvrp(std::uint64_t seed, int num_customers, const CvrpGenCfg& cfg) {
  if (num_customers < 1) {
    throw std::invalid_argument("generate_cvrp: need at least one customer");
  }
  if (cfg.min_demand > cfg.max_demand || cfg.min_demand <= 0 || cfg.capacity < cfg.max_demand) {
    throw std::invalid_argument("generate_cvrp: invalid generation range");
  }
  Rng rng(derive_seed(seed, {0x43565250ULL}));
  CvrpInstance inst;
  inst.capacity = cfg.capacity;
  inst.depot = {rng.uniform(), rng.uniform()};
  inst.coords.reserve(static_cast<std::size_t>(num_customers));
  inst.demands.reserve(static_cast<std::size_t>(num_customers));
  for (int i = 0; i < num_customers; ++i) {
    inst.coords.push_back({rng.uniform(), rng.uniform()});
    inst.demands.push_back(rng.uniform_int(cfg.min_demand, cfg.max_demand));
  }
  inst.validate();
  return inst;
}

std::vector<Route> split_routes_by_capacity(const CvrpInstance& inst,
                                            const std::vector<int>& visit_order) {
  std::vector<Route> routes;
  Route current;
  int load = 0;
  for (int c : visit_order) {
    const int d = inst.demands[static_cast<std::size_t>(c)];
    if (!current.empty() && load + d > inst.capacity) {
      routes.push_back(std::move(current));
      current.clear();
      load = 0;
    }
    current.push_back(c);
    load += d;
  }
  if (!current.empty()) routes.push_back(std::move(current));
  return routes;
}

namespace {

double dist(const Coord& a, const Coord& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

ObjectiveVector evaluate_cvrp(const CvrpInstance& inst, const std::vector<Route>& routes) {
  const int n = inst.num_customers();
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  double d_total = 0.0;
  double d_max = 0.0;
  for (const auto& route : routes) {
    if (route.empty()) {
      throw std::invalid_argument("evaluate_cvrp: empty route");
    }
    int load = 0;
    double d_route = 0.0;
    const Coord* prev = &inst.depot;
    for (int c : route) {
      if (c < 0 || c >= n) throw std::invalid_argument("evaluate_cvrp: unknown customer index");
      if (seen[static_cast<std::size_t>(c)]++) {
        throw std::invalid_argument("evaluate_cvrp: duplicated customer");
      }
      load += inst.demands[static_cast<std::size_t>(c)];
      const Coord& here = inst.coords[static_cast<std::size_t>(c)];
      d_route += dist(*prev, here);
      prev = &here;
    }
    if (load > inst.capacity) {
      throw std::invalid_argument("evaluate_cvrp: route exceeds vehicle capacity");
    }
    d_route += dist(*prev, inst.depot);
    d_total += d_route;
    d_max = std::max(d_max, d_route);
  }
  for (int c = 0; c < n; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      throw std::invalid_argument("evaluate_cvrp: customer not covered by any route");
    }
  }
  return {d_total, d_max};
}

}  // namespace gsmodac
