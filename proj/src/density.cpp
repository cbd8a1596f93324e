#include "smax/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smax {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundarySlack = 1e-9;
}  // namespace

// --- Region ------------------------------------------------------------------

Region Region::axis_rectangle(Point lo, Point hi) {
  if (!(lo.x <= hi.x) || !(lo.y <= hi.y)) {
    throw std::invalid_argument("Region::axis_rectangle: lo must be <= hi");
  }
  Region r;
  r.kind_ = Kind::AxisRectangle;
  r.lo_ = lo;
  r.hi_ = hi;
  return r;
}

Region Region::corner_region(Point v, const SmoothedDist& dist) {
  Region r;
  r.kind_ = Kind::CornerRegion;
  r.lo_ = v;
  r.dist_ = std::make_shared<SmoothedDist>(dist);
  return r;
}

Region Region::corner_triangle(Point v, double delta) {
  Region r;
  r.kind_ = Kind::CornerTriangle;
  r.lo_ = v;
  r.a_ = delta;
  return r;
}

Region Region::annular_sector(double theta_lo, double theta_hi, double sigma, double delta) {
  if (!(theta_lo < theta_hi)) throw std::invalid_argument("annular_sector: bad angles");
  if (!(sigma >= 0.0) || !(sigma <= 1.0 + delta)) {
    throw std::invalid_argument("annular_sector: sigma out of [0, 1+delta]");
  }
  Region r;
  r.kind_ = Kind::AnnularSector;
  r.a_ = theta_lo;
  r.b_ = theta_hi;
  r.c_ = sigma;
  r.d_ = delta;
  return r;
}

Region Region::wedge(double theta_lo, double theta_hi, double delta) {
  if (!(theta_lo < theta_hi)) throw std::invalid_argument("wedge: bad angles");
  Region r;
  r.kind_ = Kind::Wedge;
  r.a_ = theta_lo;
  r.b_ = theta_hi;
  r.d_ = delta;
  return r;
}

Region Region::predicate(std::function<bool(Point)> fn) {
  Region r;
  r.kind_ = Kind::Predicate;
  r.fn_ = std::move(fn);
  return r;
}

bool Region::contains(Point u) const {
  switch (kind_) {
    case Kind::AxisRectangle:
      return u.x >= lo_.x && u.x <= hi_.x && u.y >= lo_.y && u.y <= hi_.y;
    case Kind::CornerRegion:
      return u.x >= lo_.x && u.y >= lo_.y && support_contains(*dist_, u);
    case Kind::CornerTriangle:
      return u.x >= lo_.x && u.y >= lo_.y && u.x + u.y <= 1.0 + a_ + kBoundarySlack;
    case Kind::AnnularSector: {
      const double rad = std::hypot(u.x, u.y);
      if (rad < 1.0 + d_ - c_ || rad > 1.0 + d_ + kBoundarySlack) return false;
      const double th = std::atan2(u.y, u.x);
      return th >= a_ && th <= b_;
    }
    case Kind::Wedge: {
      if (u.y < 0.0) return false;
      const double dx = u.x - 1.0;
      const double rad = std::hypot(dx, u.y);
      if (rad > d_ + kBoundarySlack || rad == 0.0) return false;
      const double th = std::atan2(u.y, dx);
      return th > a_ && th <= b_;
    }
    case Kind::Predicate:
      return fn_(u);
  }
  return false;
}

bool Region::has_anchor() const { return kind_ != Kind::Predicate; }

Point Region::anchor() const {
  switch (kind_) {
    case Kind::AxisRectangle:
    case Kind::CornerRegion:
    case Kind::CornerTriangle:
      return lo_;
    case Kind::AnnularSector: {
      const double rmin = 1.0 + d_ - c_;
      return {rmin * std::cos(b_), rmin * std::sin(a_)};
    }
    case Kind::Wedge:
      return {1.0, 0.0};
    case Kind::Predicate:
      break;
  }
  throw std::logic_error("Region::anchor: predicate region has no anchor");
}

MCEstimate measure_mc(const SmoothedDist& dist, const Region& region, long long samples,
                      const SeedSpec& seed) {
  if (samples < 1000) throw std::invalid_argument("measure_mc: samples must be >= 1000");
  StreamRng rng(seed);
  long long hits = 0;
  for (long long i = 0; i < samples; ++i) {
    if (region.contains(sample_smoothed(dist, rng))) ++hits;
  }
  MCEstimate est;
  est.samples = samples;
  est.mean = static_cast<double>(hits) / static_cast<double>(samples);
  est.stderr_ = std::sqrt(std::max(0.0, est.mean * (1.0 - est.mean) / static_cast<double>(samples)));
  return est;
}

// --- numeric density ---------------------------------------------------------

DensityEvaluator::DensityEvaluator(const SmoothedDist& dist, int m) : dist_(dist) {
  if (!(dist.delta > 0.0)) {
    throw std::invalid_argument("density_numeric: delta = 0 has the uniform density 1/a_p");
  }
  bp_ = make_ball_shape(dist.p, 1.0, {0.0, 0.0}, m);
  bq_unit_ = make_ball_shape(dist.q, 1.0, {0.0, 0.0}, m);
  scale_ = 1.0 / (unit_ball_area(dist.p) * unit_ball_area(dist.q) * dist.delta * dist.delta);
}

double DensityEvaluator::operator()(Point v) const {
  const BallShape bq = bq_unit_.translated_scaled(v, dist_.delta);
  return intersection_area(bp_, bq) * scale_;
}

double density_numeric(const SmoothedDist& dist, Point v, int m) {
  return DensityEvaluator(dist, m)(v);
}

namespace {

// Integral of f over the column region {x0 <= x <= x1, ybase <= y <= ytop(x)}
// by nested midpoint quadrature.
template <typename F, typename Top>
double integrate_columns(const F& f, double x0, double x1, double ybase, const Top& ytop, int nx,
                         int ny) {
  if (!(x1 > x0)) return 0.0;
  const double hx = (x1 - x0) / nx;
  double total = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = x0 + (i + 0.5) * hx;
    const double yt = ytop(x);
    if (yt <= ybase) continue;
    const double hy = (yt - ybase) / ny;
    double col = 0.0;
    for (int j = 0; j < ny; ++j) {
      col += f({x, ybase + (j + 0.5) * hy});
    }
    total += col * hy * hx;
  }
  return total;
}

// mu(T(v)) for the (1,1) triangle by quadrature of the numeric density.
double quad_mu_triangle(const DensityEvaluator& f, Point v, double delta, int n = 96) {
  const double x1 = 1.0 + delta - v.y;
  return integrate_columns(f, v.x, x1, v.y, [&](double x) { return 1.0 + delta - x; }, n, n);
}

}  // namespace

double integrate_density_columns(const DensityEvaluator& f, double x0, double x1, double ybase,
                                 const std::function<double(double)>& ytop, int nx, int ny) {
  return integrate_columns(f, x0, x1, ybase, ytop, nx, ny);
}

namespace {

// mu(R_i(sigma)) for the (2,2) sector by radial quadrature; f is radial.
double quad_mu_sector(const DensityEvaluator& f, double delta, double theta_lo, double theta_hi,
                      double sigma, int n = 512) {
  const double r1 = 1.0 + delta;
  const double r0 = r1 - sigma;
  const double h = (r1 - r0) / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = r0 + (i + 0.5) * h;
    total += r * f({r, 0.0});
  }
  return (theta_hi - theta_lo) * total * h;
}

}  // namespace

// --- B2B2 density ------------------------------------------------------------

B2B2Density::B2B2Density(double delta) : delta_(delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("B2B2Density: delta must be > 0");
  DensityEvaluator f(SmoothedDist(PNorm::finite(2), PNorm::finite(2), delta));
  // reference at sigma = delta, i.e. on the unit circle; both branches meet here
  k_ = f({1.0, 0.0});
}

double B2B2Density::operator()(double sigma) const {
  if (!(sigma >= 0.0) || sigma > 1.0 + delta_ + kBoundarySlack) {
    throw std::domain_error("density_b2b2: sigma out of [0, 1 + delta]");
  }
  if (sigma <= delta_) return k_ * std::pow(sigma / delta_, 1.5);
  return k_;
}

double density_b2b2(double delta, double sigma) { return B2B2Density(delta)(sigma); }

// --- B1B1 triangle measure ----------------------------------------------------

B1B1TriangleMeasure::B1B1TriangleMeasure(double delta, long long calibration_samples,
                                         std::uint64_t calibration_seed)
    : delta_(delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("B1B1TriangleMeasure: delta must be > 0");
  const SmoothedDist dist(PNorm::finite(1), PNorm::finite(1), delta);
  DensityEvaluator f(dist);

  const double d = delta;
  // per-branch reference points, chosen to sit inside their zone for any delta
  const double sig_m = (d < 1.5) ? d / 2.0 : d - 0.75;
  const Point ref_m{(1.0 + d - sig_m) / 2.0, (1.0 + d - sig_m) / 2.0};
  const double xu = std::min(d / 4.0, 0.5);
  const Point ref_u{xu, 1.0 + d - d / 2.0 - xu};  // sigma = delta/2, y >= 1
  const Point ref_b{ref_u.y, ref_u.x};
  const Point ref_i{0.25, 0.25};

  auto calibrate = [&](Point ref, double scale) {
    const double mu_quad = quad_mu_triangle(f, ref, d);
    const long long expected_hits =
        static_cast<long long>(mu_quad * static_cast<double>(calibration_samples));
    if (expected_hits >= 100) {
      MCEstimate est = measure_mc(dist, Region::corner_triangle(ref, d), calibration_samples,
                                  {calibration_seed, 0, 0});
      if (est.mean > 0.0) return est.mean / scale;
    }
    return mu_quad / scale;  // MC reference would be noise; use quadrature
  };

  c_m_ = calibrate(ref_m, sig_m * sig_m * sig_m / d);
  c_u_ = calibrate(ref_u, (1.0 + d - ref_u.y) * std::pow(d / 2.0, 3) / (d * d));
  c_b_ = calibrate(ref_b, (1.0 + d - ref_b.x) * std::pow(d / 2.0, 3) / (d * d));
  const double sig_i = sigma(ref_i);
  c_i_ = calibrate(ref_i, sig_i * sig_i);
}

B1B1TriangleMeasure::Zone B1B1TriangleMeasure::classify(Point v) const {
  if (v.x < -kBoundarySlack || v.y < -kBoundarySlack || sigma(v) < -kBoundarySlack) {
    throw std::domain_error("measure_t_b1b1: v outside first-quadrant support");
  }
  if (v.x + v.y <= 1.0) return Zone::I;
  if (v.y >= 1.0 && v.x >= 1.0) {
    // U and B overlap for delta > 1; take the tighter corner distance
    return (1.0 + delta_ - v.x <= 1.0 + delta_ - v.y) ? Zone::B : Zone::U;
  }
  if (v.y >= 1.0) return Zone::U;
  if (v.x >= 1.0) return Zone::B;
  return Zone::M;
}

double B1B1TriangleMeasure::operator()(Point v) const {
  const double sig = std::max(0.0, sigma(v));
  switch (classify(v)) {
    case Zone::U:
      return c_u_ * (1.0 + delta_ - v.y) * sig * sig * sig / (delta_ * delta_);
    case Zone::B:
      return c_b_ * (1.0 + delta_ - v.x) * sig * sig * sig / (delta_ * delta_);
    case Zone::M:
      return c_m_ * sig * sig * sig / delta_;
    case Zone::I:
      return c_i_ * sig * sig;
  }
  return 0.0;
}

double measure_t_b1b1(double delta, Point v) { return B1B1TriangleMeasure(delta)(v); }

// --- B2B2 sector measure -------------------------------------------------------

B2B2SectorMeasure::B2B2SectorMeasure(double delta, int t, long long calibration_samples,
                                     std::uint64_t calibration_seed)
    : delta_(delta), t_(t) {
  if (!(delta > 0.0)) throw std::invalid_argument("B2B2SectorMeasure: delta must be > 0");
  if (t < 8) throw std::invalid_argument("measure_sector_b2b2: t must be >= 8");
  const SmoothedDist dist(PNorm::finite(2), PNorm::finite(2), delta);
  DensityEvaluator f(dist);
  const double theta = 2.0 * kPi / t;
  const double mu_quad = quad_mu_sector(f, delta, 0.0, theta, delta);
  const long long expected_hits =
      static_cast<long long>(mu_quad * static_cast<double>(calibration_samples));
  double mu_ref = mu_quad;
  if (expected_hits >= 100) {
    MCEstimate est = measure_mc(dist, Region::annular_sector(0.0, theta, delta, delta),
                                calibration_samples, {calibration_seed, 0, 0});
    if (est.mean > 0.0) mu_ref = est.mean;
  }
  // both branches equal delta/t at sigma = delta, so one constant suffices
  k_ = mu_ref / (delta / t);
}

double B2B2SectorMeasure::operator()(double sigma) const {
  if (!(sigma >= 0.0) || sigma > 1.0 + delta_ + kBoundarySlack) {
    throw std::domain_error("measure_sector_b2b2: sigma out of [0, 1 + delta]");
  }
  if (sigma <= delta_) return k_ * std::pow(sigma, 2.5) / (t_ * std::pow(delta_, 1.5));
  return k_ * sigma / t_;
}

double measure_sector_b2b2(double delta, int t, double sigma) {
  return B2B2SectorMeasure(delta, t)(sigma);
}

// --- B1B2 density ---------------------------------------------------------------

B1B2Density::B1B2Density(double delta)
    : delta_(delta), numeric_(SmoothedDist(PNorm::finite(1), PNorm::finite(2), delta)) {
  if (!(delta > 0.0)) throw std::invalid_argument("B1B2Density: delta must be > 0");
  const double d = delta;

  // zone A constant (the delta-dependence is absorbed by calibration)
  c_a_ = numeric_({0.45, 0.2});

  // zone B: the three branches share one constant when the crossovers are
  // pinned at sigma = 1 and delta*sigma = 1 (they agree there algebraically)
  const double sig_b = 0.5 * std::min({d, 1.0 / d, 1.0});
  const double cb = (1.0 + std::sqrt(2.0) * d - std::sqrt(2.0) * sig_b) / 2.0;
  const Point ref_b{cb, cb};
  double kb = numeric_(ref_b) / std::pow(sig_b / d, 1.5);
  c_b32_ = c_bs_ = c_b1_ = kb;

  // zone C: case 1 and case 2 agree at sigma = delta*gamma^2; one constant
  const double th = kPi / 8.0;
  const double sig_c = d / 4.0;
  const double rr = d - sig_c;
  const Point ref_c{1.0 + rr * std::cos(th), rr * std::sin(th)};
  const double scale_c =
      std::min(sig_c, 1.0) * std::min(std::sqrt(d * sig_c), 1.0) / (d * d);
  c_c1_ = c_c2_ = numeric_(ref_c) / scale_c;
}

double B1B2Density::sigma(Point v) const {
  if (classify(v) == Zone::C) {
    return delta_ - std::hypot(v.x - 1.0, v.y);
  }
  return (1.0 + std::sqrt(2.0) * delta_ - (v.x + v.y)) / std::sqrt(2.0);
}

double B1B2Density::theta(Point v) const { return std::atan2(v.y, v.x - 1.0); }

B1B2Density::Zone B1B2Density::classify(Point v) const {
  if (v.y < -kBoundarySlack || v.y > v.x + kBoundarySlack) {
    throw std::domain_error("density_b1b2: v outside the first octant");
  }
  if (v.x + v.y <= 1.0) {
    return Zone::A;
  }
  if (v.x - v.y < 1.0) {
    if (v.x + v.y > 1.0 + std::sqrt(2.0) * delta_ + kBoundarySlack) {
      throw std::domain_error("density_b1b2: v outside the support");
    }
    return Zone::B;
  }
  if (std::hypot(v.x - 1.0, v.y) > delta_ * (1.0 + kBoundarySlack) + kBoundarySlack) {
    throw std::domain_error("density_b1b2: v outside the support");
  }
  return Zone::C;
}

double B1B2Density::operator()(Point v) const {
  const Zone z = classify(v);
  const double d = delta_;
  if (z == Zone::A) return c_a_;
  if (z == Zone::B) {
    const double s = std::max(0.0, sigma(v));
    if (s >= 1.0) return c_b1_ / (d * d);
    if (d * s >= 1.0) return c_bs_ * s / (d * d);
    return c_b32_ * std::pow(s / d, 1.5);
  }
  const double s = std::max(0.0, sigma(v));
  // the closed form for C is only trusted near the boundary; defer otherwise
  if (s > d / 2.0) return numeric_(v);
  const double gamma = kPi / 4.0 - theta(v);
  if (s >= d * gamma * gamma) {
    return c_c1_ * std::min(s, 1.0) * std::min(std::sqrt(d * s), 1.0) / (d * d);
  }
  return c_c2_ * std::min(s, 1.0) * std::min(s / gamma, 1.0) / (d * d);
}

double density_b1b2(double delta, Point v) { return B1B2Density(delta)(v); }

// --- BInfQ density ----------------------------------------------------------------

BInfQDensity::BInfQDensity(const PNorm& q, double delta) : q_(q), delta_(delta) {
  if (q.is_infinite()) throw std::invalid_argument("density_binfq: q must be finite");
  if (!(delta > 0.0)) throw std::invalid_argument("BInfQDensity: delta must be > 0");
  DensityEvaluator f(SmoothedDist(PNorm::infinity(), q, delta));
  const double d = delta;
  const double qq = q.value();

  c_a_ = f({0.3, 0.4});

  const double t = d * std::pow(0.5, 1.0 / qq) / 2.0;
  const Point ref_b{1.0 + t, 1.0 + t};
  c_b_ = f(ref_b) / (std::min(alpha(ref_b), 1.0) * std::min(beta(ref_b), 1.0) / (d * d));

  const Point ref_c{1.0 + d / 2.0, 0.0};
  c_c_ = f(ref_c) / (std::min(alpha(ref_c), 1.0) * std::min(beta(ref_c), 1.0) / (d * d));
}

BInfQDensity::Zone BInfQDensity::classify(Point v) const {
  const double d = delta_;
  if (v.x < -kBoundarySlack || v.y < -kBoundarySlack || v.x > 1.0 + d + kBoundarySlack ||
      v.y > 1.0 + d + kBoundarySlack) {
    throw std::domain_error("density_binfq: v outside first-quadrant support");
  }
  const bool right = v.x >= 1.0, top = v.y >= 1.0;
  if (!right && !top) return Zone::A;
  if (right && top) {
    const double qq = q_.value();
    if (std::pow(v.x - 1.0, qq) + std::pow(v.y - 1.0, qq) > std::pow(d, qq) * (1.0 + 1e-9)) {
      throw std::domain_error("density_binfq: v outside the corner cap");
    }
    return Zone::B;
  }
  return right ? Zone::C : Zone::D;
}

double BInfQDensity::alpha(Point v) const {
  const double d = delta_, qq = q_.value();
  switch (classify(v)) {
    case Zone::B:
      return std::pow(std::max(0.0, std::pow(d, qq) - std::pow(std::max(0.0, v.y - 1.0), qq)),
                      1.0 / qq) -
             (v.x - 1.0);
    case Zone::C:
      return 1.0 + d - v.x;
    case Zone::D:
      return alpha({v.y, v.x});
    default:
      throw std::domain_error("density_binfq: alpha undefined in zone A");
  }
}

double BInfQDensity::beta(Point v) const {
  const double d = delta_, qq = q_.value();
  switch (classify(v)) {
    case Zone::B:
      return std::pow(std::max(0.0, std::pow(d, qq) - std::pow(std::max(0.0, v.x - 1.0), qq)),
                      1.0 / qq) -
             (v.y - 1.0);
    case Zone::C: {
      const double a = alpha(v);
      return std::pow(std::max(0.0, std::pow(d, qq) - std::pow(std::max(0.0, d - a), qq)),
                      1.0 / qq);
    }
    case Zone::D:
      return beta({v.y, v.x});
    default:
      throw std::domain_error("density_binfq: beta undefined in zone A");
  }
}

double BInfQDensity::operator()(Point v) const {
  const double d = delta_;
  switch (classify(v)) {
    case Zone::A:
      return c_a_;
    case Zone::B:
      return c_b_ * std::min(alpha(v), 1.0) * std::min(beta(v), 1.0) / (d * d);
    case Zone::C:
      return c_c_ * std::min(alpha(v), 1.0) * std::min(beta(v), 1.0) / (d * d);
    case Zone::D:
      return (*this)({v.y, v.x});  // x<->y symmetry maps D onto C
  }
  return 0.0;
}

double density_binfq(const PNorm& q, double delta, Point v) {
  return BInfQDensity(q, delta)(v);
}

}  // namespace smax
