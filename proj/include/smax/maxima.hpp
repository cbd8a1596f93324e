#pragma once

#include <vector>

#include "smax/geometry.hpp"

// Maximal (Pareto/skyline) points of a finite planar set. u is dominated by
// v when u != v (as coordinate pairs), u.x <= v.x and u.y <= v.y; hence
// coordinate-identical duplicates do not dominate each other and are all
// retained. Sampled inputs hit exact ties with probability 0.

namespace smax {

struct MaximaResult {
  std::vector<Point> maxima;  // sorted by descending x
  int count = 0;
};

inline bool dominates(Point v, Point u) {
  return u.x <= v.x && u.y <= v.y && (u.x < v.x || u.y < v.y);
}

// Sort by x descending (ties y descending), sweep a running max of y.
// O(n log n). Rejects empty input.
MaximaResult maximal_points(const std::vector<Point>& points);

// Direct all-pairs dominance test; O(n^2). Test oracle.
MaximaResult maximal_points_bruteforce(const std::vector<Point>& points);

// Count-only variant of maximal_points; avoids building the result list.
int maxima_count(std::vector<Point> points);

}  // namespace smax
