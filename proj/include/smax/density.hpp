#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "smax/geometry.hpp"
#include "smax/sampling.hpp"

// Density of B_p + delta*B_q from the preimage-area formula
//   f(v) = Area(B_q(v, delta) ∩ B_p) / (a_p a_q delta^2),
// Monte Carlo measure estimation for regions, and the closed-form regime
// expressions for the (1,1), (2,2), (1,2) and (inf,q) families. The closed
// forms carry unknown order constants; each family object calibrates one
// multiplicative constant per branch at construction and is immutable
// afterwards, so instances are freely shareable across threads.

namespace smax {

// Testable subset of the plane used for measure estimation.
class Region {
 public:
  enum class Kind { AxisRectangle, CornerRegion, CornerTriangle, AnnularSector, Wedge, Predicate };

  static Region axis_rectangle(Point lo, Point hi);
  // P(v): points of the support dominating v.
  static Region corner_region(Point v, const SmoothedDist& dist);
  // T(v) for the B_1 + delta*B_1 case: {u >= v, u.x + u.y <= 1 + delta}.
  static Region corner_triangle(Point v, double delta);
  // R_i(sigma) for the B_2 + delta*B_2 case.
  static Region annular_sector(double theta_lo, double theta_hi, double sigma, double delta);
  // W(theta1, theta2) about the corner (1,0) of the B_1 + delta*B_2 support.
  static Region wedge(double theta_lo, double theta_hi, double delta);
  static Region predicate(std::function<bool(Point)> fn);

  bool contains(Point u) const;
  Kind kind() const { return kind_; }
  // Anchor under dominance: every member dominates-or-equals this point.
  // Used by the dominance-closure check; meaningful for all kinds except
  // Predicate (for which it is unavailable).
  bool has_anchor() const;
  Point anchor() const;

 private:
  Region() = default;
  Kind kind_ = Kind::Predicate;
  Point lo_{0, 0}, hi_{0, 0};
  double a_ = 0, b_ = 0, c_ = 0, d_ = 0;  // kind-specific scalars
  std::shared_ptr<SmoothedDist> dist_;
  std::function<bool(Point)> fn_;
};

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample sd / sqrt(samples)
  long long samples = 0;
};

// Unbiased frequency estimate of mu(region) under dist; samples >= 1000.
MCEstimate measure_mc(const SmoothedDist& dist, const Region& region, long long samples,
                      const SeedSpec& seed);

// f(v) with shapes cached across evaluations. delta > 0 required.
class DensityEvaluator {
 public:
  explicit DensityEvaluator(const SmoothedDist& dist, int m = 4096);
  double operator()(Point v) const;
  const SmoothedDist& dist() const { return dist_; }

 private:
  SmoothedDist dist_;
  BallShape bp_;
  BallShape bq_unit_;
  double scale_ = 0.0;
};

double density_numeric(const SmoothedDist& dist, Point v, int m = 4096);

// Integral of f over {x0 <= x <= x1, ybase <= y <= ytop(x)} by nested
// midpoint quadrature with exact column bounds.
double integrate_density_columns(const DensityEvaluator& f, double x0, double x1, double ybase,
                                 const std::function<double(double)>& ytop, int nx = 96,
                                 int ny = 96);

// ---- closed-form families ---------------------------------------------------

// (2,2): f = K (sigma/delta)^{3/2} for sigma <= delta, K for sigma >= delta.
class B2B2Density {
 public:
  explicit B2B2Density(double delta);
  double operator()(double sigma) const;  // sigma in [0, 1 + delta]
  double delta() const { return delta_; }

 private:
  double delta_;
  double k_;
};

double density_b2b2(double delta, double sigma);

// (1,1): Theta-scale of mu(T(v)) by region U/B/M/I.
class B1B1TriangleMeasure {
 public:
  enum class Zone { U, B, M, I };
  B1B1TriangleMeasure(double delta, long long calibration_samples = 400000,
                      std::uint64_t calibration_seed = 0x5eedb1b1);
  double operator()(Point v) const;
  Zone classify(Point v) const;
  double sigma(Point v) const { return 1.0 + delta_ - v.x - v.y; }

 private:
  double delta_;
  double c_u_, c_b_, c_m_, c_i_;
};

double measure_t_b1b1(double delta, Point v);

// (2,2) sectors: mu(R_i(sigma)) scale, continuous at sigma = delta.
class B2B2SectorMeasure {
 public:
  B2B2SectorMeasure(double delta, int t, long long calibration_samples = 400000,
                    std::uint64_t calibration_seed = 0x5eedb2b2);
  double operator()(double sigma) const;

 private:
  double delta_;
  int t_;
  double k_;
};

double measure_sector_b2b2(double delta, int t, double sigma);

// (1,2): density over the first-octant support, regions A/B/C.
class B1B2Density {
 public:
  enum class Zone { A, B, C };
  explicit B1B2Density(double delta);
  double operator()(Point v) const;
  Zone classify(Point v) const;
  // sigma(v): distance to the outer boundary (line for A/B, arc for C).
  double sigma(Point v) const;
  double theta(Point v) const;  // angle at (1,0) from the x-axis, for C

 private:
  double delta_;
  DensityEvaluator numeric_;
  double c_a_, c_b1_, c_bs_, c_b32_, c_c1_, c_c2_;
};

double density_b1b2(double delta, Point v);

// (inf,q): density over the first-quadrant support, regions A/B/C/D.
class BInfQDensity {
 public:
  enum class Zone { A, B, C, D };
  BInfQDensity(const PNorm& q, double delta);
  double operator()(Point v) const;
  Zone classify(Point v) const;
  double alpha(Point v) const;
  double beta(Point v) const;

 private:
  PNorm q_;
  double delta_;
  double c_a_, c_b_, c_c_;
};

double density_binfq(const PNorm& q, double delta, Point v);

}  // namespace smax
