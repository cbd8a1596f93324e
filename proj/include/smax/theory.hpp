#pragma once

#include <string>
#include <vector>

#include "smax/density.hpp"
#include "smax/geometry.hpp"

// The regime table for E[M_n] under B_p + delta*B_q, the exact-baseline
// harmonic numbers, and the lower-bound witness constructions (families of
// pairwise disjoint dominant regions of measure Theta(1/n) each).

namespace smax {

// Growth law g(n, delta) for one regime.
struct GrowthLaw {
  enum class Kind { Power, Log, LogPlusPower };
  Kind kind = Kind::Power;
  double n_exp = 0.5;      // exponent of n in the power part
  double delta_exp = 0.0;  // exponent of delta in the power part

  double value(double n, double delta) const;
  std::string describe() const;
};

struct RegimePrediction {
  PNorm p;
  PNorm q;
  // regime bounds as powers of n: delta in [n^lo_exp, n^hi_exp]
  double regime_lo_exp = 0.0;
  double regime_hi_exp = 0.0;
  GrowthLaw growth;
  // d(log g)/d(log n) at fixed delta (asymptotic; the power part for
  // log-plus-power regimes)
  double expected_exponent = 0.0;
  bool log_like = false;  // pure-log regime: verdicts use the ln-fit path

  RegimePrediction(PNorm p_, PNorm q_) : p(p_), q(q_) {}
};

// Regime lookup for (p,q) in {1,2,inf}^2 or p = inf with finite q (plus the
// swapped pairs via the delta -> 1/delta duality). Throws on unsupported
// pairs. delta may be 0 (the unperturbed regime).
RegimePrediction predict_regime(const PNorm& p, const PNorm& q, double delta, double n);

// (growth value, exponent) of the regime containing delta.
std::pair<double, double> predicted_growth(const PNorm& p, const PNorm& q, double delta,
                                           double n);

// Expected n-exponent when delta follows the rule delta = n^a.
double expected_exponent_for_rule(const PNorm& p, const PNorm& q, double rule_exponent,
                                  double n_ref);

// H_n by direct summation; n >= 1.
double harmonic_number(long long n);

enum class WitnessFamily { B1B1, B2B2, BInfQ };

// A family of pairwise disjoint dominant regions, each of measure
// Theta(1/n), certifying the lower bound for its distribution.
struct WitnessSet {
  WitnessFamily family;
  SmoothedDist dist;
  std::vector<Region> regions;
  std::vector<Point> points;  // defining corners
  double sigma = 0.0;
  int m = 0;
  long long n = 0;
  double predicted_m = 0.0;  // the Theta target the construction aims for
};

// Corner triangles T(p_i) along the outer diagonal edge, middle third,
// sigma = (delta/n)^{1/3}. Requires n^{-1/2} <= delta <= 1.
WitnessSet witness_b1b1(double delta, long long n);

// Corner regions P(v_i) on the circle of radius 1+delta-sigma,
// sigma = sigma_scale * delta^{3/7} / n^{2/7}, spaced just past the
// horizontal extent beta(v_i) of each region so they stay disjoint.
// Requires n^{-1/2} <= delta <= 1.
WitnessSet witness_b2b2(double delta, long long n, double sigma_scale = 1.15,
                        double spacing_margin = 1.1);

// Corner regions along the top cap g(x) = 1 + (delta^q - (x-1)^q)^{1/q},
// count ~ 0.4 * sqrt(delta) * n^{1/4}, placed with spacing proportional to
// 1/sqrt(|g'|) so each region has measure ~const/n. Requires finite q and
// n^{-1/2} <= delta <= sqrt(n).
WitnessSet witness_binfq(const PNorm& q, double delta, long long n,
                         double count_scale = 0.4);

struct WitnessReport {
  bool disjoint = false;
  bool dominant = false;
  bool measures_in_band = false;
  bool pass = false;  // disjoint && dominant && measures_in_band
  double worst_overlap_ratio = 0.0;
  long long dominance_violations = 0;
  std::vector<double> n_mu;  // per-region n * mu
  double band_lo = 0.02, band_hi = 50.0;
  double m_ratio = 0.0;  // m / predicted_m
  bool m_within_factor3 = false;
  std::string notes;
};

// Checks pairwise disjointness (polygon intersection areas), dominance
// closure (mc_samples shared support samples tested against every region)
// and the per-region n*mu band (quadrature of the numeric density over the
// region for the three standard families, measure_mc otherwise).
WitnessReport verify_witness(const SmoothedDist& dist, const WitnessSet& w,
                             long long mc_samples = 100000);

}  // namespace smax
