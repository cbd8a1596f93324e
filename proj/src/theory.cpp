#include "smax/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smax/maxima.hpp"

namespace smax {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double GrowthLaw::value(double n, double delta) const {
  switch (kind) {
    case Kind::Power:
      return std::pow(n, n_exp) * (delta_exp == 0.0 ? 1.0 : std::pow(delta, delta_exp));
    case Kind::Log:
      return std::log(n);
    case Kind::LogPlusPower:
      return std::log(n) + std::pow(n, n_exp) * std::pow(delta, delta_exp);
  }
  return 0.0;
}

std::string GrowthLaw::describe() const {
  char buf[96];
  switch (kind) {
    case Kind::Power:
      std::snprintf(buf, sizeof buf, "n^%.6g * delta^%.6g", n_exp, delta_exp);
      break;
    case Kind::Log:
      std::snprintf(buf, sizeof buf, "ln n");
      break;
    case Kind::LogPlusPower:
      std::snprintf(buf, sizeof buf, "ln n + n^%.6g * delta^%.6g", n_exp, delta_exp);
      break;
  }
  return buf;
}

namespace {

struct RegimeRow {
  double lo, hi;  // delta in [n^lo, n^hi]
  GrowthLaw law;
};

// Table rows for the directly analyzed pairs; swapped pairs go through the
// delta -> 1/delta duality.
std::vector<RegimeRow> regime_rows(const PNorm& p, const PNorm& q, bool& swapped) {
  using K = GrowthLaw::Kind;
  const GrowthLaw sqrt_n{K::Power, 0.5, 0.0};
  swapped = false;

  if (p.is_infinite() && q.is_infinite()) {
    return {{-kInf, kInf, {K::Log, 0.0, 0.0}}};
  }
  if (p.is_infinite()) {
    return {{-kInf, -0.5, {K::Log, 0.0, 0.0}},
            {-0.5, 0.5, {K::LogPlusPower, 0.25, 0.5}},
            {0.5, kInf, sqrt_n}};
  }
  if (q.is_infinite()) {
    std::vector<RegimeRow> rows = regime_rows(q, p, swapped);
    swapped = true;
    return rows;
  }
  const double pv = p.value(), qv = q.value();
  if (pv == 1.0 && qv == 1.0) {
    return {{-kInf, -0.5, sqrt_n},
            {-0.5, 0.0, {K::Power, 1.0 / 3.0, -1.0 / 3.0}},
            {0.0, 0.5, {K::Power, 1.0 / 3.0, 1.0 / 3.0}},
            {0.5, kInf, sqrt_n}};
  }
  if (pv == 2.0 && qv == 2.0) {
    return {{-kInf, -0.5, sqrt_n},
            {-0.5, 0.0, {K::Power, 2.0 / 7.0, -3.0 / 7.0}},
            {0.0, 0.5, {K::Power, 2.0 / 7.0, 3.0 / 7.0}},
            {0.5, kInf, sqrt_n}};
  }
  if (pv == 1.0 && qv == 2.0) {
    return {{-kInf, -0.5, sqrt_n},
            {-0.5, 1.0 / 26.0, {K::Power, 2.0 / 7.0, -3.0 / 7.0}},
            {1.0 / 26.0, 0.5, {K::Power, 0.25, 0.5}},
            {0.5, kInf, sqrt_n}};
  }
  if (pv == 2.0 && qv == 1.0) {
    std::vector<RegimeRow> rows = regime_rows(q, p, swapped);
    swapped = true;
    return rows;
  }
  throw std::invalid_argument("predict_regime: unsupported (p, q) pair");
}

}  // namespace

RegimePrediction predict_regime(const PNorm& p, const PNorm& q, double delta, double n) {
  if (!(delta >= 0.0)) throw std::invalid_argument("predict_regime: delta must be >= 0");
  if (!(n > 1.0)) throw std::invalid_argument("predict_regime: n must be > 1");
  bool swapped = false;
  std::vector<RegimeRow> rows = regime_rows(p, q, swapped);

  const double eff_delta = swapped ? (delta == 0.0 ? kInf : 1.0 / delta) : delta;
  const double a = (eff_delta == 0.0)  ? -kInf
                   : (eff_delta == kInf) ? kInf
                                         : std::log(eff_delta) / std::log(n);

  for (const RegimeRow& row : rows) {
    if (a >= row.lo && a <= row.hi) {
      RegimePrediction pred(p, q);
      pred.growth = row.law;
      pred.regime_lo_exp = row.lo;
      pred.regime_hi_exp = row.hi;
      if (swapped) {
        pred.growth.delta_exp = -row.law.delta_exp;
        pred.regime_lo_exp = (row.hi == kInf) ? -kInf : -row.hi;
        pred.regime_hi_exp = (row.lo == -kInf) ? kInf : -row.lo;
      }
      pred.log_like = (row.law.kind == GrowthLaw::Kind::Log);
      pred.expected_exponent = pred.log_like ? 0.0 : pred.growth.n_exp;
      return pred;
    }
  }
  throw std::logic_error("predict_regime: no regime matched");
}

std::pair<double, double> predicted_growth(const PNorm& p, const PNorm& q, double delta,
                                           double n) {
  const RegimePrediction pred = predict_regime(p, q, delta, n);
  return {pred.growth.value(n, delta), pred.expected_exponent};
}

double expected_exponent_for_rule(const PNorm& p, const PNorm& q, double rule_exponent,
                                  double n_ref) {
  const double delta = std::pow(n_ref, rule_exponent);
  const RegimePrediction pred = predict_regime(p, q, delta, n_ref);
  if (pred.log_like) return 0.0;
  return pred.growth.n_exp + rule_exponent * pred.growth.delta_exp;
}

double harmonic_number(long long n) {
  if (n < 1) throw std::invalid_argument("harmonic_number: n must be >= 1");
  double sum = 0.0;
  for (long long k = n; k >= 1; --k) sum += 1.0 / static_cast<double>(k);
  return sum;
}

// --- witness constructions ----------------------------------------------------

WitnessSet witness_b1b1(double delta, long long n) {
  if (!(delta >= 1.0 / std::sqrt(static_cast<double>(n)) - 1e-12) || !(delta <= 1.0 + 1e-12)) {
    throw std::domain_error("witness_b1b1: requires n^{-1/2} <= delta <= 1");
  }
  const double nd = static_cast<double>(n);
  const double sigma = std::cbrt(delta / nd);
  const long long m_full = static_cast<long long>(std::floor((1.0 + delta) / sigma));

  WitnessSet w{WitnessFamily::B1B1, SmoothedDist(PNorm::finite(1), PNorm::finite(1), delta),
               {},        {},
               sigma,     0,
               n,         std::cbrt(nd / delta)};
  const long long lo = (m_full + 2) / 3;
  const long long hi = (2 * m_full) / 3;
  for (long long i = lo; i <= hi; ++i) {
    const Point p{i * sigma, 1.0 + delta - i * sigma - sigma};
    if (p.y < 0.0) continue;
    w.points.push_back(p);
    w.regions.push_back(Region::corner_triangle(p, delta));
  }
  w.m = static_cast<int>(w.points.size());
  return w;
}

WitnessSet witness_b2b2(double delta, long long n, double sigma_scale, double spacing_margin) {
  if (!(delta >= 1.0 / std::sqrt(static_cast<double>(n)) - 1e-12) || !(delta <= 1.0 + 1e-12)) {
    throw std::domain_error("witness_b2b2: requires n^{-1/2} <= delta <= 1");
  }
  const double nd = static_cast<double>(n);
  const double sigma = sigma_scale * std::pow(delta, 3.0 / 7.0) / std::pow(nd, 2.0 / 7.0);
  const double radius = 1.0 + delta;
  const double d = radius - sigma;
  const SmoothedDist dist(PNorm::finite(2), PNorm::finite(2), delta);

  WitnessSet w{WitnessFamily::B2B2, dist, {},
               {},                  sigma, 0,
               n,                   std::pow(nd, 2.0 / 7.0) / std::pow(delta, 3.0 / 7.0)};
  const double x_lo = d * std::cos(5.0 * kPi / 12.0);
  const double x_hi = d * std::cos(kPi / 12.0);
  double x = x_lo;
  while (x <= x_hi) {
    const double y = std::sqrt(std::max(0.0, d * d - x * x));
    w.points.push_back({x, y});
    w.regions.push_back(Region::corner_region({x, y}, dist));
    const double beta = std::sqrt(radius * radius - y * y) - x;  // horizontal extent of P(v)
    x += spacing_margin * beta;
  }
  w.m = static_cast<int>(w.points.size());
  return w;
}

WitnessSet witness_binfq(const PNorm& q, double delta, long long n, double count_scale) {
  if (q.is_infinite()) throw std::invalid_argument("witness_binfq: q must be finite");
  const double nd = static_cast<double>(n);
  if (!(delta >= 1.0 / std::sqrt(nd) - 1e-12) || !(delta <= std::sqrt(nd) + 1e-12)) {
    throw std::domain_error("witness_binfq: requires n^{-1/2} <= delta <= sqrt(n)");
  }
  const double qq = q.value();
  const SmoothedDist dist(PNorm::infinity(), q, delta);
  auto gtop = [&](double x) {
    const double t = std::max(0.0, std::pow(delta, qq) - std::pow(std::max(0.0, x - 1.0), qq));
    return 1.0 + std::pow(t, 1.0 / qq);
  };
  auto gslope = [&](double x) {  // |g'(x)| on the cap
    const double u = (x - 1.0) / delta;
    const double t = std::max(1e-12, 1.0 - std::pow(u, qq));
    return std::pow(u, qq - 1.0) * std::pow(t, 1.0 / qq - 1.0);
  };

  WitnessSet w{WitnessFamily::BInfQ, dist, {}, {}, 0.0, 0, n,
               std::sqrt(delta) * std::pow(nd, 0.25)};
  const int m = std::max(1, static_cast<int>(std::floor(count_scale * w.predicted_m + 0.5)));
  // place m+1 knots on [1 + delta/12, 1 + 11 delta/12] with density
  // proportional to sqrt(|g'|); each region then has measure ~const/n
  const double x_lo = 1.0 + delta / 12.0;
  const double x_hi = 1.0 + 11.0 * delta / 12.0;
  const int kGrid = 4096;
  std::vector<double> cum(kGrid + 1, 0.0);
  const double h = (x_hi - x_lo) / kGrid;
  for (int i = 0; i < kGrid; ++i) {
    cum[i + 1] = cum[i] + std::sqrt(gslope(x_lo + (i + 0.5) * h)) * h;
  }
  std::vector<double> knots(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double target = cum[kGrid] * j / m;
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    const int idx = std::min<int>(kGrid, static_cast<int>(it - cum.begin()));
    knots[j] = x_lo + idx * h;
  }
  knots[0] = x_lo;
  knots[m] = x_hi;
  w.sigma = (x_hi - x_lo) / m;  // mean spacing, for reporting
  for (int j = 0; j < m; ++j) {
    const Point p{knots[j], gtop(knots[j + 1])};
    w.points.push_back(p);
    w.regions.push_back(Region::corner_region(p, dist));
  }
  w.m = m;
  return w;
}

// --- verification ---------------------------------------------------------------

namespace {

ConvexPolygon support_corner_polygon(const WitnessSet& w) {
  switch (w.family) {
    case WitnessFamily::B1B1:
      return ConvexPolygon::unchecked({{1.0 + w.dist.delta, 0.0},
                                       {0.0, 1.0 + w.dist.delta},
                                       {-(1.0 + w.dist.delta), 0.0},
                                       {0.0, -(1.0 + w.dist.delta)}});
    case WitnessFamily::B2B2:
      return ball_polygon(PNorm::finite(2), 1.0 + w.dist.delta, {0.0, 0.0}, 2048);
    case WitnessFamily::BInfQ: {
      const BallShape cap = make_ball_shape(w.dist.q, w.dist.delta, {1.0, 1.0}, 2048);
      if (cap.is_disk) return ball_polygon(PNorm::finite(2), w.dist.delta, {1.0, 1.0}, 2048);
      return cap.poly;
    }
  }
  return ConvexPolygon();
}

// Polygonal footprint of one witness region for the disjointness test.
ConvexPolygon region_polygon(const WitnessSet& w, size_t i, const ConvexPolygon& support) {
  const Point v = w.points[i];
  const double bound = 1.0 + w.dist.delta + 1.0;
  const ConvexPolygon rect = ConvexPolygon::unchecked(
      {{v.x, v.y}, {bound, v.y}, {bound, bound}, {v.x, bound}});
  return clip_convex(rect, support);
}

double region_mu_quadrature(const WitnessSet& w, size_t i, const DensityEvaluator& f) {
  const Point v = w.points[i];
  const double delta = w.dist.delta;
  switch (w.family) {
    case WitnessFamily::B1B1: {
      const double x1 = 1.0 + delta - v.y;
      return integrate_density_columns(f, v.x, x1, v.y,
                                       [&](double x) { return 1.0 + delta - x; });
    }
    case WitnessFamily::B2B2: {
      const double radius = 1.0 + delta;
      const double x1 = std::sqrt(std::max(0.0, radius * radius - v.y * v.y));
      return integrate_density_columns(
          f, v.x, x1, v.y,
          [&](double x) { return std::sqrt(std::max(0.0, radius * radius - x * x)); });
    }
    case WitnessFamily::BInfQ: {
      const double qq = w.dist.q.value();
      const double rel = std::pow(delta, qq) - std::pow(std::max(0.0, v.y - 1.0), qq);
      const double x1 = 1.0 + std::pow(std::max(0.0, rel), 1.0 / qq);
      return integrate_density_columns(f, v.x, x1, v.y, [&](double x) {
        const double t =
            std::pow(delta, qq) - std::pow(std::max(0.0, x - 1.0), qq);
        return 1.0 + std::pow(std::max(0.0, t), 1.0 / qq);
      });
    }
  }
  return 0.0;
}

}  // namespace

WitnessReport verify_witness(const SmoothedDist& dist, const WitnessSet& w,
                             long long mc_samples) {
  WitnessReport report;
  const size_t m = w.regions.size();
  if (m == 0) {
    report.notes = "empty witness";
    return report;
  }

  // 1. pairwise disjointness via polygon intersection areas
  const ConvexPolygon support = support_corner_polygon(w);
  std::vector<ConvexPolygon> polys(m);
  for (size_t i = 0; i < m; ++i) polys[i] = region_polygon(w, i, support);
  report.disjoint = true;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      if (polys[i].empty() || polys[j].empty()) continue;
      const ConvexPolygon inter = clip_convex(polys[i], polys[j]);
      if (inter.empty()) continue;
      const double ratio =
          inter.area() / std::max(kEpsArea, std::min(polys[i].area(), polys[j].area()));
      report.worst_overlap_ratio = std::max(report.worst_overlap_ratio, ratio);
      if (ratio > 1e-6) report.disjoint = false;
    }
  }

  // 2. dominance closure on a shared pool of support samples
  const long long pool = std::max<long long>(mc_samples, 10000);
  StreamRng rng(SeedSpec{0x7e571f1ed, 17, 29});
  std::vector<Point> anchors(m);
  std::vector<bool> anchor_ok(m);
  for (size_t i = 0; i < m; ++i) {
    anchors[i] = w.regions[i].has_anchor() ? w.regions[i].anchor() : Point{0, 0};
    anchor_ok[i] = w.regions[i].has_anchor() && w.regions[i].contains(anchors[i]);
  }
  report.dominance_violations = 0;
  for (long long s = 0; s < pool; ++s) {
    const Point u = sample_smoothed(dist, rng);
    for (size_t i = 0; i < m; ++i) {
      if (!anchor_ok[i]) continue;
      if (u.x >= anchors[i].x && u.y >= anchors[i].y && dominates(u, anchors[i]) &&
          !w.regions[i].contains(u)) {
        ++report.dominance_violations;
      }
    }
  }
  report.dominant = (report.dominance_violations == 0);

  // 3. per-region measure bands
  report.measures_in_band = true;
  const double nd = static_cast<double>(w.n);
  bool quad_ok = (w.family == WitnessFamily::B1B1 || w.family == WitnessFamily::B2B2 ||
                  w.family == WitnessFamily::BInfQ);
  DensityEvaluator f(w.dist);
  for (size_t i = 0; i < m; ++i) {
    double mu;
    if (quad_ok && w.regions[i].kind() == Region::Kind::CornerRegion) {
      mu = region_mu_quadrature(w, i, f);
    } else if (quad_ok && w.regions[i].kind() == Region::Kind::CornerTriangle) {
      mu = region_mu_quadrature(w, i, f);
    } else {
      mu = measure_mc(dist, w.regions[i], 1000000, SeedSpec{0xCAFE, 3, i}).mean;
    }
    const double nmu = nd * mu;
    report.n_mu.push_back(nmu);
    if (nmu < report.band_lo || nmu > report.band_hi) report.measures_in_band = false;
  }

  report.m_ratio = (w.predicted_m > 0.0) ? w.m / w.predicted_m : 0.0;
  report.m_within_factor3 = report.m_ratio >= 1.0 / 3.0 && report.m_ratio <= 3.0;
  report.pass = report.disjoint && report.dominant && report.measures_in_band;
  return report;
}

}  // namespace smax
