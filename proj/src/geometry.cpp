#include "smax/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <string>

namespace smax {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool finite_point(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

PNorm PNorm::finite(double value) {
  if (!(value >= 1.0) || !std::isfinite(value)) {
    throw std::invalid_argument("PNorm: finite p must satisfy 1 <= p < inf");
  }
  return PNorm(false, value);
}

PNorm PNorm::infinity() { return PNorm(true, 0.0); }

PNorm PNorm::parse(const char* text) {
  std::string s(text);
  if (s == "inf" || s == "infinity" || s == "Inf" || s == "oo") {
    return infinity();
  }
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("PNorm: cannot parse '" + s + "'");
  if (std::isinf(v)) return infinity();
  return finite(v);
}

std::vector<char> PNorm::label() const {
  char buf[40];
  if (infinite_) {
    std::snprintf(buf, sizeof buf, "inf");
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", value_);
  }
  std::vector<char> out(buf, buf + std::strlen(buf) + 1);
  return out;
}

double lp_norm(const PNorm& p, Point v) {
  const double ax = std::fabs(v.x), ay = std::fabs(v.y);
  const double m = std::max(ax, ay);
  if (p.is_infinite() || m == 0.0) return m;
  const double pv = p.value();
  if (pv == 1.0) return ax + ay;
  if (pv == 2.0) return std::hypot(ax, ay);
  const double rx = ax / m, ry = ay / m;
  return m * std::pow(std::pow(rx, pv) + std::pow(ry, pv), 1.0 / pv);
}

double unit_ball_area(const PNorm& p) {
  if (p.is_infinite()) return 4.0;
  const double pv = p.value();
  const double g1 = std::tgamma(1.0 + 1.0 / pv);
  const double g2 = std::tgamma(1.0 + 2.0 / pv);
  return 4.0 * g1 * g1 / g2;
}

double norm_ratio(const PNorm& p, const PNorm& q) {
  // max ||u||_p over ||u||_q = 1 in 2-D: attained either at an axis point
  // or at the diagonal; equals max(1, 2^(1/p - 1/q)).
  const double ip = p.is_infinite() ? 0.0 : 1.0 / p.value();
  const double iq = q.is_infinite() ? 0.0 : 1.0 / q.value();
  return std::max(1.0, std::pow(2.0, ip - iq));
}

// --- ConvexPolygon -----------------------------------------------------------

ConvexPolygon ConvexPolygon::make(std::vector<Point> vertices) {
  const size_t n = vertices.size();
  if (n < 3) throw std::invalid_argument("ConvexPolygon: need >= 3 vertices");
  double scale = 0.0;
  for (const Point& v : vertices) {
    if (!finite_point(v)) throw std::invalid_argument("ConvexPolygon: non-finite vertex");
    scale = std::max({scale, std::fabs(v.x), std::fabs(v.y)});
  }
  const double tol = kEpsPoint * std::max(1.0, scale);
  for (size_t i = 0; i < n; ++i) {
    const Point a = vertices[i];
    const Point b = vertices[(i + 1) % n];
    const Point c = vertices[(i + 2) % n];
    if (std::fabs(a.x - b.x) <= tol && std::fabs(a.y - b.y) <= tol) {
      throw std::invalid_argument("ConvexPolygon: repeated vertex");
    }
    // convex (non-reflex) up to tolerance; collinear runs are accepted
    if (cross(b - a, c - b) < -tol * std::max(1.0, scale)) {
      throw std::invalid_argument("ConvexPolygon: not convex/CCW");
    }
  }
  ConvexPolygon poly;
  poly.verts_ = std::move(vertices);
  return poly;
}

ConvexPolygon ConvexPolygon::unchecked(std::vector<Point> vertices) {
  ConvexPolygon poly;
  poly.verts_ = std::move(vertices);
  return poly;
}

double ConvexPolygon::area() const {
  const size_t n = verts_.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = verts_[i];
    const Point& b = verts_[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

bool ConvexPolygon::contains(Point v, double tol) const {
  const size_t n = verts_.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = verts_[i];
    const Point& b = verts_[(i + 1) % n];
    if (cross(b - a, v - a) < -tol) return false;
  }
  return true;
}

ConvexPolygon ConvexPolygon::translated(Point offset) const {
  std::vector<Point> out(verts_);
  for (Point& v : out) v = v + offset;
  return ConvexPolygon::unchecked(std::move(out));
}

ConvexPolygon ball_polygon(const PNorm& p, double radius, Point center, int m) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball_polygon: radius must be > 0");
  if (m < 16) throw std::invalid_argument("ball_polygon: m < 16 is too coarse");
  std::vector<Point> verts;
  verts.reserve(static_cast<size_t>(m));
  if (p.is_infinite()) {
    // radial projection onto the square boundary
    for (int k = 0; k < m; ++k) {
      const double t = 2.0 * kPi * k / m;
      const double c = std::cos(t), s = std::sin(t);
      const double scale = std::max(std::fabs(c), std::fabs(s));
      verts.push_back({center.x + radius * c / scale, center.y + radius * s / scale});
    }
  } else {
    // signed-power map: exact boundary points, uniform angular parameter
    const double e = 2.0 / p.value();
    for (int k = 0; k < m; ++k) {
      const double t = 2.0 * kPi * k / m;
      const double c = std::cos(t), s = std::sin(t);
      const double x = (c == 0.0) ? 0.0 : std::copysign(std::pow(std::fabs(c), e), c);
      const double y = (s == 0.0) ? 0.0 : std::copysign(std::pow(std::fabs(s), e), s);
      verts.push_back({center.x + radius * x, center.y + radius * y});
    }
  }
  return ConvexPolygon::unchecked(std::move(verts));
}

namespace {

// Clips subject against the half-plane left of edge a->b.
void clip_edge(const std::vector<Point>& in, Point a, Point b, std::vector<Point>& out) {
  out.clear();
  const size_t n = in.size();
  if (n == 0) return;
  const Point dir = b - a;
  double prev_side = cross(dir, in[n - 1] - a);
  for (size_t i = 0; i < n; ++i) {
    const double side = cross(dir, in[i] - a);
    const Point& prev = in[(i + n - 1) % n];
    if (side >= 0.0) {
      if (prev_side < 0.0) {
        const double t = prev_side / (prev_side - side);
        out.push_back(prev + t * (in[i] - prev));
      }
      out.push_back(in[i]);
    } else if (prev_side >= 0.0) {
      const double t = prev_side / (prev_side - side);
      out.push_back(prev + t * (in[i] - prev));
    }
    prev_side = side;
  }
}

std::vector<Point> dedup(const std::vector<Point>& in, double tol) {
  std::vector<Point> out;
  out.reserve(in.size());
  for (const Point& v : in) {
    if (out.empty() || std::fabs(out.back().x - v.x) > tol || std::fabs(out.back().y - v.y) > tol) {
      out.push_back(v);
    }
  }
  if (out.size() > 1 && std::fabs(out.front().x - out.back().x) <= tol &&
      std::fabs(out.front().y - out.back().y) <= tol) {
    out.pop_back();
  }
  return out;
}

}  // namespace

ConvexPolygon clip_convex(const ConvexPolygon& a, const ConvexPolygon& b) {
  if (a.empty() || b.empty()) return ConvexPolygon();
  std::vector<Point> cur = a.vertices();
  std::vector<Point> next;
  const std::vector<Point>& clip = b.vertices();
  const size_t m = clip.size();
  for (size_t i = 0; i < m && !cur.empty(); ++i) {
    clip_edge(cur, clip[i], clip[(i + 1) % m], next);
    cur.swap(next);
  }
  cur = dedup(cur, 1e-15);
  if (cur.size() < 3) return ConvexPolygon();
  return ConvexPolygon::unchecked(std::move(cur));
}

double lens_height(double R, double r, double d) {
  if (!(R > 0.0) || !(r > 0.0)) throw std::invalid_argument("lens_height: radii must be > 0");
  if (d > R + r) throw std::domain_error("lens_height: circles disjoint (d > R + r)");
  if (d < std::fabs(R - r)) throw std::domain_error("lens_height: circles nested (d < |R - r|)");
  const double prod =
      (-d + r - R) * (-d - r + R) * (-d + r + R) * (d + r + R);
  return std::sqrt(std::max(0.0, prod)) / d;
}

double circle_circle_area(double R, double r, double d) {
  if (d >= R + r) return 0.0;
  if (d <= std::fabs(R - r)) {
    const double rm = std::min(R, r);
    return kPi * rm * rm;
  }
  const double c1 = std::clamp((d * d + R * R - r * r) / (2.0 * d * R), -1.0, 1.0);
  const double c2 = std::clamp((d * d + r * r - R * R) / (2.0 * d * r), -1.0, 1.0);
  const double prod = (-d + r + R) * (d + r - R) * (d - r + R) * (d + r + R);
  return R * R * std::acos(c1) + r * r * std::acos(c2) - 0.5 * std::sqrt(std::max(0.0, prod));
}

namespace {

// Contribution to Area(disc(0,r) ∩ polygon) of one directed edge a->b,
// i.e. the signed area of the circular triangle (0, a, b) clipped to the
// disc. Summed over a CCW polygon this yields the intersection area.
double edge_disc_contribution(Point a, Point b, double r) {
  const double r2 = r * r;
  auto sector = [&](Point u, Point v) {
    // signed angular sector between directions u and v
    double ang = std::atan2(cross(u, v), u.x * v.x + u.y * v.y);
    return 0.5 * r2 * ang;
  };
  const bool ain = (a.x * a.x + a.y * a.y) <= r2;
  const bool bin = (b.x * b.x + b.y * b.y) <= r2;
  if (ain && bin) return 0.5 * cross(a, b);

  // intersections of segment a + t(b-a), t in [0,1] with the circle
  const Point d = b - a;
  const double A = d.x * d.x + d.y * d.y;
  const double B = 2.0 * (a.x * d.x + a.y * d.y);
  const double C = a.x * a.x + a.y * a.y - r2;
  const double disc = B * B - 4.0 * A * C;
  if (disc <= 0.0 || A == 0.0) return sector(a, b);
  const double sq = std::sqrt(disc);
  double t1 = (-B - sq) / (2.0 * A);
  double t2 = (-B + sq) / (2.0 * A);
  t1 = std::clamp(t1, 0.0, 1.0);
  t2 = std::clamp(t2, 0.0, 1.0);
  const Point p1 = a + t1 * d;
  const Point p2 = a + t2 * d;
  if (ain && !bin) return 0.5 * cross(a, p2) + sector(p2, b);
  if (!ain && bin) return sector(a, p1) + 0.5 * cross(p1, b);
  // both outside; chord may still pass through the disc
  if (t2 > t1) return sector(a, p1) + 0.5 * cross(p1, p2) + sector(p2, b);
  return sector(a, b);
}

}  // namespace

double circle_polygon_area(Point center, double r, const ConvexPolygon& poly) {
  if (poly.empty() || r <= 0.0) return 0.0;
  const std::vector<Point>& vs = poly.vertices();
  const size_t n = vs.size();
  double area = 0.0;
  for (size_t i = 0; i < n; ++i) {
    area += edge_disc_contribution(vs[i] - center, vs[(i + 1) % n] - center, r);
  }
  return std::max(0.0, area);
}

// --- SmoothedDist / support --------------------------------------------------

SmoothedDist::SmoothedDist(PNorm p_, PNorm q_, double delta_) : p(p_), q(q_), delta(delta_) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("SmoothedDist: delta must be finite and >= 0");
  }
}

namespace {

// Boundary point of the unit B_p at angular parameter t.
Point boundary_point(const PNorm& p, double t) {
  const double c = std::cos(t), s = std::sin(t);
  if (p.is_infinite()) {
    const double scale = std::max(std::fabs(c), std::fabs(s));
    return {c / scale, s / scale};
  }
  const double e = 2.0 / p.value();
  const double x = (c == 0.0) ? 0.0 : std::copysign(std::pow(std::fabs(c), e), c);
  const double y = (s == 0.0) ? 0.0 : std::copysign(std::pow(std::fabs(s), e), s);
  return {x, y};
}

// Min of a unimodal-enough function on [lo, hi] by golden-section search.
template <typename F>
double golden_min(F f, double lo, double hi, int iters) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - phi * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + phi * (b - a); f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

double segment_point_distance(const PNorm& q, Point v, Point a, Point b) {
  auto f = [&](double t) { return lp_norm(q, v - (a + t * (b - a))); };
  return golden_min(f, 0.0, 1.0, 60);
}

}  // namespace

double lq_distance_to_ball(const PNorm& p, const PNorm& q, Point v) {
  if (lp_norm(p, v) <= 1.0) return 0.0;
  if (p.is_infinite()) {
    // coordinates decouple: nearest point is the clamp
    const Point c{std::clamp(v.x, -1.0, 1.0), std::clamp(v.y, -1.0, 1.0)};
    return lp_norm(q, v - c);
  }
  if (p.value() == 1.0) {
    const Point corners[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
      best = std::min(best, segment_point_distance(q, v, corners[i], corners[(i + 1) % 4]));
    }
    return best;
  }
  // smooth boundary: coarse scan then local refinement
  const int kScan = 128;
  double best_t = 0.0, best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kScan; ++k) {
    const double t = 2.0 * kPi * k / kScan;
    const double d = lp_norm(q, v - boundary_point(p, t));
    if (d < best) { best = d; best_t = t; }
  }
  const double w = 2.0 * kPi / kScan;
  auto f = [&](double t) { return lp_norm(q, v - boundary_point(p, t)); };
  return std::min(best, golden_min(f, best_t - w, best_t + w, 60));
}

bool support_contains(const SmoothedDist& dist, Point v) {
  const double slack = 1e-12;
  if (lp_norm(dist.p, v) <= 1.0 + slack) return true;
  if (dist.delta == 0.0) return false;
  return lq_distance_to_ball(dist.p, dist.q, v) <= dist.delta * (1.0 + 1e-9) + slack;
}

// --- ball shapes -------------------------------------------------------------

BallShape BallShape::translated_scaled(Point new_center, double scale) const {
  BallShape out;
  out.is_disk = is_disk;
  out.radius = radius * scale;
  out.center = new_center;
  if (!is_disk) {
    std::vector<Point> vs(poly.vertices());
    for (Point& v : vs) {
      v = {new_center.x + scale * (v.x - center.x), new_center.y + scale * (v.y - center.y)};
    }
    out.poly = ConvexPolygon::unchecked(std::move(vs));
  }
  return out;
}

BallShape make_ball_shape(const PNorm& p, double radius, Point center, int m) {
  BallShape shape;
  shape.radius = radius;
  shape.center = center;
  if (p.is_infinite()) {
    shape.poly = ConvexPolygon::unchecked({{center.x + radius, center.y - radius},
                                           {center.x + radius, center.y + radius},
                                           {center.x - radius, center.y + radius},
                                           {center.x - radius, center.y - radius}});
  } else if (p.value() == 1.0) {
    shape.poly = ConvexPolygon::unchecked({{center.x + radius, center.y},
                                           {center.x, center.y + radius},
                                           {center.x - radius, center.y},
                                           {center.x, center.y - radius}});
  } else if (p.value() == 2.0) {
    shape.is_disk = true;
  } else {
    shape.poly = ball_polygon(p, radius, center, m);
  }
  return shape;
}

double intersection_area(const BallShape& a, const BallShape& b) {
  if (a.is_disk && b.is_disk) {
    const double d = std::hypot(a.center.x - b.center.x, a.center.y - b.center.y);
    return circle_circle_area(a.radius, b.radius, d);
  }
  if (a.is_disk) return circle_polygon_area(a.center, a.radius, b.poly);
  if (b.is_disk) return circle_polygon_area(b.center, b.radius, a.poly);
  ConvexPolygon inter = clip_convex(a.poly, b.poly);
  return inter.empty() ? 0.0 : inter.area();
}

}  // namespace smax
