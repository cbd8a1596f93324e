#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

// 2-D geometry of L_p balls: norms, areas, polygonal approximation,
// convex clipping and the circle-circle lens. Everything here is a pure
// function of its inputs; no global state.

namespace smax {

// Centralized geometric tolerances.
inline constexpr double kEpsArea = 1e-9;
inline constexpr double kEpsPoint = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

bool finite_point(Point p);

// A norm index p that is either a finite real >= 1 or infinity.
class PNorm {
 public:
  static PNorm finite(double value);
  static PNorm infinity();
  // Parses "1", "2.5", "inf" / "infinity".
  static PNorm parse(const char* text);

  bool is_infinite() const { return infinite_; }
  // Finite value; only meaningful when !is_infinite().
  double value() const { return value_; }

  bool operator==(const PNorm& o) const {
    return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
  }

  // "inf" or the decimal value, for CSV/JSON output.
  std::vector<char> label() const;

 private:
  PNorm(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_ = false;
  double value_ = 2.0;
};

// ||v||_p. Uses the scaled form m*((|x|/m)^p + (|y|/m)^p)^(1/p) so that
// large finite p degrades gracefully to the max norm instead of overflowing.
double lp_norm(const PNorm& p, Point v);

// Area of the unit ball B_p: 4*Gamma(1+1/p)^2 / Gamma(1+2/p), 4 for p=inf.
double unit_ball_area(const PNorm& p);

// max over unit B_q of ||u||_p; bounds mixed-norm containment:
// B_q(v, delta) subset B_p whenever ||v||_p <= 1 - delta * norm_ratio(p,q).
double norm_ratio(const PNorm& p, const PNorm& q);

// Convex polygon, vertices counter-clockwise.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;
  // Validating constructor: >= 3 vertices, CCW, convex up to kEpsPoint,
  // no repeated vertex. Throws std::invalid_argument.
  static ConvexPolygon make(std::vector<Point> vertices);
  // For internal use where the producer guarantees shape (clip output etc.).
  static ConvexPolygon unchecked(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return verts_; }
  bool empty() const { return verts_.empty(); }
  double area() const;
  bool contains(Point v, double tol = kEpsPoint) const;
  ConvexPolygon translated(Point offset) const;

 private:
  std::vector<Point> verts_;
};

// Inscribed m-gon of B_p(center, radius), vertices on the ball boundary at
// equally spaced angular parameters (signed-power map for finite p, radial
// projection for p = inf). Rejects m < 16.
ConvexPolygon ball_polygon(const PNorm& p, double radius, Point center, int m);

// Convex intersection via half-plane clipping. Empty result is a value.
ConvexPolygon clip_convex(const ConvexPolygon& a, const ConvexPolygon& b);

// Full height of the intersection lens of circles radius R (center origin)
// and r (center (d,0)). Requires |R - r| <= d <= R + r; throws
// std::domain_error distinguishing nested from disjoint.
double lens_height(double R, double r, double d);

// Area of the intersection of two discs (0 when disjoint, smaller-disc area
// when nested); total function, unlike lens_height.
double circle_circle_area(double R, double r, double d);

// Area of disc(center, r) intersected with a convex polygon.
double circle_polygon_area(Point center, double r, const ConvexPolygon& poly);

// The convolution distribution B_p + delta*B_q and its support.
struct SmoothedDist {
  PNorm p;
  PNorm q;
  double delta = 0.0;  // >= 0; delta == 0 means B_p exactly

  SmoothedDist(PNorm p_, PNorm q_, double delta_);
  // Half-width of the axis-aligned bounding box of the support.
  double bound() const { return 1.0 + delta; }
};

// True iff v lies in the Minkowski sum B_p + delta*B_q, i.e. the L_q
// distance from v to B_p is <= delta. Exact for v inside B_p; otherwise a
// 1-D minimization over the boundary parameterization (exact per-edge search
// for the polytope balls p in {1, inf}).
bool support_contains(const SmoothedDist& dist, Point v);

// Minimal L_q distance from v to B_p (0 inside).
double lq_distance_to_ball(const PNorm& p, const PNorm& q, Point v);

// --- ball shapes for exact intersection areas -------------------------------
//
// B_1 and B_inf are exact 4-gons and B_2 is a disc, so preimage areas for
// all pairs in {1,2,inf}^2 avoid m-gon approximation entirely. General
// finite p falls back to an inscribed m-gon.

struct BallShape {
  bool is_disk = false;
  double radius = 1.0;
  Point center{0.0, 0.0};
  ConvexPolygon poly;  // valid when !is_disk

  BallShape translated_scaled(Point new_center, double scale) const;
};

BallShape make_ball_shape(const PNorm& p, double radius, Point center, int m);
double intersection_area(const BallShape& a, const BallShape& b);

}  // namespace smax
