#pragma once

// Test-only oracles, independent of the library paths they check.

#include <algorithm>
#include <cmath>
#include <vector>

#include "smax/geometry.hpp"
#include "smax/sampling.hpp"

namespace oracles {

inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t k = x.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < k; ++i) { sx += x[i]; sy += y[i]; }
  const double xb = sx / k, yb = sy / k;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < k; ++i) {
    sxx += (x[i] - xb) * (x[i] - xb);
    sxy += (x[i] - xb) * (y[i] - yb);
  }
  return sxy / sxx;
}

// Area of the unit L_p ball by midpoint grid quadrature of the indicator
// |x|^p + |y|^p <= 1 on [-1,1]^2. The row sum equals the naive double loop
// (each column counts the midpoints below the boundary) but runs in O(N).
inline double grid_quadrature_ball_area(double p, long long cells_per_axis) {
  const double h = 2.0 / static_cast<double>(cells_per_axis);
  long long inside = 0;
  for (long long i = 0; i < cells_per_axis; ++i) {
    const double x = -1.0 + (i + 0.5) * h;
    const double rest = 1.0 - std::pow(std::fabs(x), p);
    if (rest <= 0.0) continue;
    const double ymax = std::pow(rest, 1.0 / p);
    // midpoints with |y| <= ymax: y_j = -1 + (j + 0.5) h
    const long long hi = static_cast<long long>(std::floor((ymax + 1.0) / h - 0.5));
    const long long lo = static_cast<long long>(std::ceil((1.0 - ymax) / h - 0.5));
    if (hi >= lo) inside += hi - lo + 1;
  }
  return static_cast<double>(inside) * h * h;
}

// Reference naive version for cross-checking the fast row count.
inline double grid_quadrature_ball_area_naive(double p, long long cells_per_axis) {
  const double h = 2.0 / static_cast<double>(cells_per_axis);
  long long inside = 0;
  for (long long i = 0; i < cells_per_axis; ++i) {
    const double x = -1.0 + (i + 0.5) * h;
    for (long long j = 0; j < cells_per_axis; ++j) {
      const double y = -1.0 + (j + 0.5) * h;
      if (std::pow(std::fabs(x), p) + std::pow(std::fabs(y), p) <= 1.0) ++inside;
    }
  }
  return static_cast<double>(inside) * h * h;
}

// Minkowski sum of two convex polygons as the hull of pairwise vertex sums.
inline smax::ConvexPolygon minkowski_sum_hull(const smax::ConvexPolygon& a,
                                              const smax::ConvexPolygon& b) {
  std::vector<smax::Point> pts;
  for (const smax::Point& u : a.vertices()) {
    for (const smax::Point& v : b.vertices()) pts.push_back(u + v);
  }
  std::sort(pts.begin(), pts.end(), [](smax::Point s, smax::Point t) {
    return s.x != t.x ? s.x < t.x : s.y < t.y;
  });
  // Andrew monotone chain
  std::vector<smax::Point> hull(2 * pts.size());
  size_t k = 0;
  for (const smax::Point& pt : pts) {
    while (k >= 2 && smax::cross(hull[k - 1] - hull[k - 2], pt - hull[k - 2]) <= 0) --k;
    hull[k++] = pt;
  }
  const size_t lower = k + 1;
  for (size_t i = pts.size(); i-- > 0;) {
    while (k >= lower && smax::cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return smax::ConvexPolygon::unchecked(hull);
}

// Signed distance proxy: positive depth of v inside the polygon under the
// cross-product metric (minimum over edges), negative outside.
inline double polygon_margin(const smax::ConvexPolygon& poly, smax::Point v) {
  const auto& vs = poly.vertices();
  double margin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < vs.size(); ++i) {
    const smax::Point a = vs[i];
    const smax::Point b = vs[(i + 1) % vs.size()];
    const smax::Point d = b - a;
    const double len = std::hypot(d.x, d.y);
    margin = std::min(margin, smax::cross(d, v - a) / std::max(len, 1e-300));
  }
  return margin;
}

// Two-sample Kolmogorov-Smirnov statistic on integer-valued samples.
inline double ks_statistic(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const int v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                              static_cast<double>(j) / b.size()));
  }
  return d;
}

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;
  long long count = 0;
};

inline MeanVar mean_var(const std::vector<double>& xs) {
  MeanVar mv;
  mv.count = static_cast<long long>(xs.size());
  for (double x : xs) mv.mean += x;
  mv.mean /= mv.count;
  for (double x : xs) mv.var += (x - mv.mean) * (x - mv.mean);
  mv.var /= std::max<long long>(1, mv.count - 1);
  return mv;
}

}  // namespace oracles
