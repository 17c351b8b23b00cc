#include "gsmodac/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gsmodac {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dominates: objective length mismatch");
  }
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

FrontPartition non_dominated_sort(std::span<const ObjectiveVector> points) {
  const std::size_t n = points.size();
  if (n == 0) {
    throw std::invalid_argument("non_dominated_sort: empty population");
  }
  const std::size_t dim = points[0].size();
  for (const auto& p : points) {
    if (p.size() != dim) {
      throw std::invalid_argument("non_dominated_sort: mixed dimensionality");
    }
  }

  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> dominating_count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(points[i], points[j])) {
        dominated[i].push_back(j);
        ++dominating_count[j];
      } else if (dominates(points[j], points[i])) {
        dominated[j].push_back(i);
        ++dominating_count[i];
      }
    }
  }

  FrontPartition part;
  part.rank.assign(n, 0);
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    if (dominating_count[i] == 0) current.push_back(i);
  }
  std::size_t level = 0;
  while (!current.empty()) {
    std::sort(current.begin(), current.end());
    for (std::size_t i : current) part.rank[i] = level;
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      for (std::size_t j : dominated[i]) {
        if (--dominating_count[j] == 0) next.push_back(j);
      }
    }
    part.fronts.push_back(std::move(current));
    current = std::move(next);
    ++level;
  }
  return part;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  const std::size_t n = front.size();
  if (n == 0) {
    throw std::invalid_argument("crowding_distance: empty front");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (n <= 2) return std::vector<double>(n, kInf);

  const std::size_t dim = front[0].size();
  std::vector<double> dist(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < dim; ++m) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (front[a][m] != front[b][m]) return front[a][m] < front[b][m];
      return a < b;
    });
    dist[order.front()] = kInf;
    dist[order.back()] = kInf;
    const double range = front[order.back()][m] - front[order.front()][m];
    if (range <= 0.0) continue;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      dist[order[k]] += (front[order[k + 1]][m] - front[order[k - 1]][m]) / range;
    }
  }
  return dist;
}

}  // namespace gsmodac
