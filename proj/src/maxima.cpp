#include "smax/maxima.hpp"

#include <algorithm>
#include <stdexcept>

namespace smax {

namespace {

bool desc_xy(const Point& a, const Point& b) {
  if (a.x != b.x) return a.x > b.x;
  return a.y > b.y;
}

void check_input(const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("maximal_points: empty input");
  for (const Point& v : points) {
    if (!finite_point(v)) throw std::invalid_argument("maximal_points: non-finite coordinate");
  }
}

}  // namespace

MaximaResult maximal_points(const std::vector<Point>& points) {
  check_input(points);
  std::vector<Point> sorted(points);
  std::sort(sorted.begin(), sorted.end(), desc_xy);

  MaximaResult result;
  double best_y = -std::numeric_limits<double>::infinity();
  bool prev_emitted = false;
  for (size_t i = 0; i < sorted.size(); ++i) {
    const Point v = sorted[i];
    bool emit = v.y > best_y;
    // exact duplicates of an emitted point are mutually non-dominating
    if (!emit && i > 0 && prev_emitted && sorted[i - 1].x == v.x && sorted[i - 1].y == v.y) {
      emit = true;
    }
    if (emit) result.maxima.push_back(v);
    prev_emitted = emit;
    best_y = std::max(best_y, v.y);
  }
  result.count = static_cast<int>(result.maxima.size());
  return result;
}

MaximaResult maximal_points_bruteforce(const std::vector<Point>& points) {
  check_input(points);
  MaximaResult result;
  const size_t n = points.size();
  for (size_t i = 0; i < n; ++i) {
    bool maximal = true;
    for (size_t j = 0; j < n && maximal; ++j) {
      if (j != i && dominates(points[j], points[i])) maximal = false;
    }
    if (maximal) result.maxima.push_back(points[i]);
  }
  std::sort(result.maxima.begin(), result.maxima.end(), desc_xy);
  result.count = static_cast<int>(result.maxima.size());
  return result;
}

int maxima_count(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("maxima_count: empty input");
  std::sort(points.begin(), points.end(), desc_xy);
  int count = 0;
  double best_y = -std::numeric_limits<double>::infinity();
  bool prev_emitted = false;
  for (size_t i = 0; i < points.size(); ++i) {
    const Point v = points[i];
    bool emit = v.y > best_y;
    if (!emit && i > 0 && prev_emitted && points[i - 1].x == v.x && points[i - 1].y == v.y) {
      emit = true;
    }
    if (emit) ++count;
    prev_emitted = emit;
    best_y = std::max(best_y, v.y);
  }
  return count;
}

}  // namespace smax
