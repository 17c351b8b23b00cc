#include "gsmodac/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsmodac {
namespace {

bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

// Keep one copy of each point that is not weakly dominated by another.
std::vector<ObjectiveVector> nondominated_subset(std::vector<ObjectiveVector> pts) {
  std::vector<char> keep(pts.size(), 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size() && keep[i]; ++j) {
      if (i == j) continue;
      if (weakly_dominates(pts[j], pts[i])) {
        // Break duplicate pairs by index so exactly one copy survives.
        keep[i] = weakly_dominates(pts[i], pts[j]) && j > i;
      }
    }
  }
  std::vector<ObjectiveVector> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (keep[i]) out.push_back(std::move(pts[i]));
  }
  return out;
}

double hv_2d_sorted(std::vector<ObjectiveVector>& pts, const ObjectiveVector& ref) {
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  double prev_y = ref[1];
  for (const auto& p : pts) {
    if (p[1] < prev_y) {
      area += (ref[0] - p[0]) * (prev_y - p[1]);
      prev_y = p[1];
    }
  }
  return area;
}

double inclusive_volume(const ObjectiveVector& p, const ObjectiveVector& ref) {
  double v = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) v *= ref[i] - p[i];
  return v;
}

double wfg(std::vector<ObjectiveVector> pts, const ObjectiveVector& ref);

double exclusive_volume(const std::vector<ObjectiveVector>& pts, std::size_t k,
                        const ObjectiveVector& ref) {
  double v = inclusive_volume(pts[k], ref);
  if (k + 1 < pts.size()) {
    std::vector<ObjectiveVector> limited;
    limited.reserve(pts.size() - k - 1);
    for (std::size_t j = k + 1; j < pts.size(); ++j) {
      ObjectiveVector q(pts[k].size());
      for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = std::max(pts[j][i], pts[k][i]);
      }
      limited.push_back(std::move(q));
    }
    v -= wfg(nondominated_subset(std::move(limited)), ref);
  }
  return v;
}

double wfg(std::vector<ObjectiveVector> pts, const ObjectiveVector& ref) {
  if (pts.empty()) return 0.0;
  if (pts.size() == 1) return inclusive_volume(pts[0], ref);
  if (ref.size() == 2) return hv_2d_sorted(pts, ref);
  // Descending sort on the last objective keeps limit sets small.
  std::sort(pts.begin(), pts.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.back() > b.back();
  });
  double total = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    total += exclusive_volume(pts, k, ref);
  }
  return total;
}

}  // namespace

double hypervolume(std::span<const ObjectiveVector> points, const ObjectiveVector& ref) {
  const std::size_t dim = ref.size();
  std::vector<ObjectiveVector> pts;
  pts.reserve(points.size());
  for (const auto& p : points) {
    if (p.size() != dim) {
      throw std::invalid_argument("hypervolume: dimension mismatch with reference point");
    }
    bool inside = true;
    for (std::size_t i = 0; i < dim; ++i) {
      if (!(p[i] < ref[i])) {
        inside = false;
        break;
      }
    }
    if (inside) pts.push_back(p);
  }
  if (pts.empty()) return 0.0;
  pts = nondominated_subset(std::move(pts));
  if (dim == 1) {
    double best = pts[0][0];
    for (const auto& p : pts) best = std::min(best, p[0]);
    return ref[0] - best;
  }
  if (dim == 2) return hv_2d_sorted(pts, ref);
  return wfg(std::move(pts), ref);
}

namespace {

double mean_min_distance(std::span<const ObjectiveVector> front,
                         std::span<const ObjectiveVector> reference_front,
                         bool clamp_at_zero) {
  if (front.empty() || reference_front.empty()) {
    throw std::invalid_argument("igd: both point sets must be nonempty");
  }
  const std::size_t dim = reference_front[0].size();
  for (const auto& p : front) {
    if (p.size() != dim) throw std::invalid_argument("igd: dimension mismatch");
  }
  double total = 0.0;
  for (const auto& z : reference_front) {
    if (z.size() != dim) throw std::invalid_argument("igd: dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : front) {
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        double d = a[i] - z[i];
        if (clamp_at_zero && d < 0.0) d = 0.0;
        s += d * d;
      }
      best = std::min(best, s);
    }
    total += std::sqrt(best);
  }
  return total / static_cast<double>(reference_front.size());
}

}  // namespace

double igd(std::span<const ObjectiveVector> front,
           std::span<const ObjectiveVector> reference_front) {
  return mean_min_distance(front, reference_front, false);
}

double igd_plus(std::span<const ObjectiveVector> front,
                std::span<const ObjectiveVector> reference_front) {
  return mean_min_distance(front, reference_front, true);
}

}  // namespace gsmodac
