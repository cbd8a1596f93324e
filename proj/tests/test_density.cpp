#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smax/density.hpp"

using namespace smax;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("density_numeric hand-checked values") {
  // nested squares: preimage area 4 delta^2 over a_p a_q delta^2 = 1/4
  const SmoothedDist sq(PNorm::infinity(), PNorm::infinity(), 0.1);
  CHECK(density_numeric(sq, {0, 0}) == doctest::Approx(0.25).epsilon(1e-12));

  // outside the support
  CHECK(density_numeric(sq, {2.0, 0}) == 0.0);

  // interior of B_2 + 0.3 B_2 at 1/a_p
  const SmoothedDist disc(PNorm::finite(2), PNorm::finite(2), 0.3);
  CHECK(density_numeric(disc, {0.3, 0.2}) == doctest::Approx(1.0 / kPi).epsilon(1e-3));

  CHECK_THROWS_AS(density_numeric(SmoothedDist(PNorm::finite(2), PNorm::finite(2), 0.0), {0, 0}),
                  std::invalid_argument);
}

TEST_CASE("density_numeric interior flatness at 1/a_p") {
  const std::vector<PNorm> norms = {PNorm::finite(1), PNorm::finite(2), PNorm::infinity()};
  for (const PNorm& p : norms) {
    for (const PNorm& q : norms) {
      for (double delta : {0.1, 0.4}) {
        const SmoothedDist dist(p, q, delta);
        const DensityEvaluator f(dist);
        // triangle-inequality interior needs the mixed-norm margin
        const double margin = 1.0 - delta * norm_ratio(p, q);
        if (margin <= 0.1) continue;
        const double expect = 1.0 / unit_ball_area(p);
        StreamRng rng(SeedSpec{401, 0, 0});
        for (int k = 0; k < 50; ++k) {
          Point v{rng.next_symmetric(), rng.next_symmetric()};
          const double norm = lp_norm(p, v);
          if (norm > 1e-9) {
            const double scale = margin * rng.next_unit() / norm;
            v = {v.x * scale, v.y * scale};
          }
          CHECK(f(v) == doctest::Approx(expect).epsilon(1e-3));
        }
      }
    }
  }
}

TEST_CASE("density_numeric integrates to 1 (spot configs)") {
  struct Cfg { PNorm p; PNorm q; double delta; };
  const Cfg cfgs[] = {{PNorm::finite(1), PNorm::finite(2), 0.1},
                      {PNorm::finite(2), PNorm::finite(2), 1.0},
                      {PNorm::infinity(), PNorm::finite(1), 5.0}};
  for (const Cfg& c : cfgs) {
    const SmoothedDist dist(c.p, c.q, c.delta);
    const DensityEvaluator f(dist);
    StreamRng rng(SeedSpec{402, 0, 0});
    const double b = dist.bound();
    const long long N = 1000000;
    double sum = 0.0;
    for (long long i = 0; i < N; ++i) {
      sum += f({b * rng.next_symmetric(), b * rng.next_symmetric()});
    }
    CHECK(sum / N * 4.0 * b * b == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("density positive implies support membership") {
  StreamRng rng(SeedSpec{403, 0, 0});
  const SmoothedDist dist(PNorm::finite(1), PNorm::infinity(), 0.6);
  const DensityEvaluator f(dist);
  for (int i = 0; i < 2000; ++i) {
    const Point v{2.2 * rng.next_symmetric(), 2.2 * rng.next_symmetric()};
    if (f(v) > 1e-9) CHECK(support_contains(dist, v));
  }
}

TEST_CASE("measure_mc basics") {
  const SmoothedDist dist(PNorm::finite(2), PNorm::finite(2), 0.01);
  const Region full = Region::predicate([](Point) { return true; });
  const MCEstimate est = measure_mc(dist, full, 10000, SeedSpec{404, 0, 0});
  CHECK(est.mean == 1.0);
  CHECK(est.stderr_ == 0.0);

  // mu(B_p) >= 0.95 for small delta
  const Region ball = Region::predicate(
      [](Point v) { return lp_norm(PNorm::finite(2), v) <= 1.0; });
  CHECK(measure_mc(dist, ball, 100000, SeedSpec{404, 1, 0}).mean >= 0.95);

  CHECK_THROWS_AS(measure_mc(dist, full, 100, SeedSpec{404, 2, 0}), std::invalid_argument);
}

TEST_CASE("measure_mc agrees with quadrature on rectangles") {
  const SmoothedDist dist(PNorm::finite(1), PNorm::finite(2), 0.5);
  const DensityEvaluator f(dist);
  const Point lo{-0.2, 0.1}, hi{0.5, 0.8};
  const Region rect = Region::axis_rectangle(lo, hi);
  const MCEstimate est = measure_mc(dist, rect, 400000, SeedSpec{405, 0, 0});
  const double quad = integrate_density_columns(
      f, lo.x, hi.x, lo.y, [&](double) { return hi.y; }, 128, 128);
  CHECK(std::fabs(est.mean - quad) < 4.0 * est.stderr_);
}

TEST_CASE("Region membership semantics") {
  const SmoothedDist dist(PNorm::finite(2), PNorm::finite(2), 0.5);
  const Region corner = Region::corner_region({0.8, 0.8}, dist);
  CHECK(corner.contains({0.9, 0.9}));
  CHECK_FALSE(corner.contains({0.7, 0.9}));   // not dominating the corner
  CHECK_FALSE(corner.contains({1.2, 1.2}));   // outside the support
  CHECK(corner.anchor().x == 0.8);

  const Region tri = Region::corner_triangle({0.5, 0.5}, 0.2);
  CHECK(tri.contains({0.55, 0.6}));
  CHECK_FALSE(tri.contains({0.8, 0.5}));  // beyond the hypotenuse

  const Region sector = Region::annular_sector(0.0, 0.5, 0.2, 0.4);
  CHECK(sector.contains({1.3, 0.2}));
  CHECK_FALSE(sector.contains({1.0, 0.1}));  // below the inner radius

  const Region wedge = Region::wedge(0.0, kPi / 8, 0.5);
  CHECK(wedge.contains({1.3, 0.05}));
  CHECK_FALSE(wedge.contains({1.1, 0.3}));  // angle above the wedge
}

TEST_CASE("density_b2b2 branches and slope") {
  const double delta = 0.25;
  const B2B2Density model(delta);
  CHECK(model(0.0) == 0.0);
  // branch continuity at sigma = delta
  CHECK(model(delta * (1 - 1e-9)) == doctest::Approx(model(delta * (1 + 1e-9))).epsilon(1e-6));
  CHECK_THROWS_AS(model(2.0 * (1.0 + delta)), std::domain_error);

  // numeric-density slope 1.5 over sigma in [delta/100, delta/3]
  const DensityEvaluator f(SmoothedDist(PNorm::finite(2), PNorm::finite(2), delta));
  std::vector<double> lx, ly;
  for (double s = delta / 100; s <= delta / 3; s *= 1.2) {
    lx.push_back(std::log(s));
    ly.push_back(std::log(f({1.0 + delta - s, 0.0})));
  }
  CHECK(oracles::ols_slope(lx, ly) == doctest::Approx(1.5).epsilon(0.1 / 1.5));

  // bounded ratio against the numeric oracle
  for (double s = delta / 50; s <= 1.0 + delta; s *= 1.6) {
    const double fn = f({1.0 + delta - s, 0.0});
    if (fn <= 0.0) continue;
    const double r = model(s) / fn;
    CHECK(r > 0.2);
    CHECK(r < 5.0);
  }
}

TEST_CASE("measure_t_b1b1 zones, boundary and ratio bands") {
  const double delta = 0.3;
  const B1B1TriangleMeasure model(delta);
  CHECK(model({0.2, 1.0 + delta - 0.2}) == doctest::Approx(0.0));  // sigma = 0
  CHECK_THROWS_AS(model({1.5, 1.5}), std::domain_error);

  using Zone = B1B1TriangleMeasure::Zone;
  CHECK(model.classify({0.3, 0.3}) == Zone::I);
  CHECK(model.classify({0.6, 0.55}) == Zone::M);
  CHECK(model.classify({0.1, 1.05}) == Zone::U);
  CHECK(model.classify({1.05, 0.1}) == Zone::B);

  // M-zone ratio to measure_mc within [1/5, 5] across a (sigma, delta) grid
  for (double d : {0.3, 0.6}) {
    const B1B1TriangleMeasure m2(d);
    const SmoothedDist dist(PNorm::finite(1), PNorm::finite(1), d);
    for (double s : {d / 6, d / 3}) {
      const Point v{(1.0 + d - s) / 2, (1.0 + d - s) / 2};
      const MCEstimate mc =
          measure_mc(dist, Region::corner_triangle(v, d), 2000000, SeedSpec{406, 0, 0});
      REQUIRE(mc.mean > 0.0);
      const double ratio = m2(v) / mc.mean;
      CHECK(ratio > 0.2);
      CHECK(ratio < 5.0);
    }
  }

  // I zone at small delta behaves like the uniform triangle area sigma^2/2
  const double d0 = 0.05;
  const B1B1TriangleMeasure small(d0);
  const Point vi{0.3, 0.3};
  const double sig = 1.0 + d0 - 0.6;
  const double uniform = 0.5 * sig * sig / unit_ball_area(PNorm::finite(1));
  const double r = small(vi) / uniform;
  CHECK(r > 0.5);
  CHECK(r < 2.0);
}

TEST_CASE("measure_sector_b2b2 branches, 1/t prefactor and slope") {
  const double delta = 0.3;
  const int t = 16;
  const B2B2SectorMeasure model(delta, t);
  CHECK_THROWS_AS(B2B2SectorMeasure(delta, 4), std::invalid_argument);
  CHECK(model(delta * (1 - 1e-9)) == doctest::Approx(model(delta * (1 + 1e-9))).epsilon(1e-6));

  // doubling t halves the measure; the two families calibrate their own
  // constants by MC, so the comparison carries the spec's 0.5 +/- 0.05 band
  const B2B2SectorMeasure twice(delta, 2 * t);
  CHECK(twice(delta / 2) / model(delta / 2) == doctest::Approx(0.5).epsilon(0.1));
  const SmoothedDist dist(PNorm::finite(2), PNorm::finite(2), delta);
  const double theta1 = 2.0 * kPi / t, theta2 = 2.0 * kPi / (2 * t);
  const MCEstimate a = measure_mc(dist, Region::annular_sector(0, theta1, delta, delta),
                                  2000000, SeedSpec{407, 0, 0});
  const MCEstimate b = measure_mc(dist, Region::annular_sector(0, theta2, delta, delta),
                                  2000000, SeedSpec{407, 1, 0});
  CHECK(b.mean / a.mean == doctest::Approx(0.5).epsilon(0.1));

  // numeric slope 2.5 of mu(R_i(sigma)) vs sigma
  const DensityEvaluator f(dist);
  std::vector<double> lx, ly;
  for (double s = delta / 100; s <= delta / 3; s *= 1.25) {
    double mu = 0;
    const int N = 400;
    const double r1 = 1 + delta, r0 = r1 - s, h = (r1 - r0) / N;
    for (int i = 0; i < N; ++i) {
      const double rr = r0 + (i + 0.5) * h;
      mu += rr * f({rr, 0.0});
    }
    mu *= (2 * kPi / t) * h;
    lx.push_back(std::log(s));
    ly.push_back(std::log(mu));
  }
  CHECK(oracles::ols_slope(lx, ly) == doctest::Approx(2.5).epsilon(0.15 / 2.5));
}

TEST_CASE("density_b1b2 zones, continuity and ratio band") {
  const double delta = 0.5;
  const B1B2Density model(delta);
  using Zone = B1B2Density::Zone;
  CHECK(model.classify({0.4, 0.2}) == Zone::A);
  CHECK(model.classify({0.8, 0.4}) == Zone::B);
  CHECK(model.classify({1.2, 0.05}) == Zone::C);
  CHECK_THROWS_AS(model({0.2, 0.4}), std::domain_error);  // above the octant
  CHECK_THROWS_AS(model({3.0, 0.0}), std::domain_error);  // outside support

  // zone A: flat constant, matches the numeric density within [1/5, 5]
  const DensityEvaluator f(SmoothedDist(PNorm::finite(1), PNorm::finite(2), delta));
  for (Point v : {Point{0.2, 0.1}, Point{0.45, 0.3}, Point{0.6, 0.2}}) {
    const double r = model(v) / f(v);
    CHECK(r > 0.2);
    CHECK(r < 5.0);
  }

  // zone B slope 1.5 against the numeric oracle
  std::vector<double> lx, ly;
  for (double s = delta / 100; s <= delta / 3; s *= 1.25) {
    const double c = (1.0 + std::sqrt(2.0) * delta - std::sqrt(2.0) * s) / 2;
    lx.push_back(std::log(s));
    ly.push_back(std::log(f({c, c})));
  }
  CHECK(oracles::ols_slope(lx, ly) == doctest::Approx(1.5).epsilon(0.1 / 1.5));

  // continuity across the octant diagonal x - y = 1: the C formula at
  // theta -> pi/4 has the same (sigma/delta)^{3/2} shape as the B formula,
  // so the two calibrated branches agree within the order band
  const double s = delta / 8;
  const double cb = (1.0 + std::sqrt(2.0) * delta - std::sqrt(2.0) * s) / 2;
  const double rr = delta - s;
  const Point vc{1.0 + rr * std::cos(kPi / 4 - 0.05), rr * std::sin(kPi / 4 - 0.05)};
  const double ratio = model({cb, cb}) / model(vc);
  CHECK(ratio > 0.2);
  CHECK(ratio < 5.0);
  // and the shapes match exactly: the ratio is sigma-independent
  const double s2 = delta / 16;
  const double cb2 = (1.0 + std::sqrt(2.0) * delta - std::sqrt(2.0) * s2) / 2;
  const double rr2 = delta - s2;
  const Point vc2{1.0 + rr2 * std::cos(kPi / 4 - 0.05), rr2 * std::sin(kPi / 4 - 0.05)};
  CHECK(model({cb2, cb2}) / model(vc2) == doctest::Approx(ratio).epsilon(1e-9));

  // 100-point ratio band over the support octant
  StreamRng rng(SeedSpec{408, 0, 0});
  int used = 0;
  while (used < 100) {
    const double x = 1.6 * rng.next_unit();
    const double y = x * rng.next_unit();
    double fm, fn;
    try {
      fm = model({x, y});
      fn = f({x, y});
    } catch (const std::domain_error&) {
      continue;
    }
    if (fn < 1e-9 || fm <= 0.0) continue;
    const double q = fm / fn;
    CHECK(q > 0.2);
    CHECK(q < 5.0);
    ++used;
  }
}

TEST_CASE("density_binfq zones, q-dependence and ratio band") {
  const double delta = 0.5;
  const BInfQDensity m1(PNorm::finite(1), delta);
  const BInfQDensity m2(PNorm::finite(2), delta);
  CHECK_THROWS_AS(BInfQDensity(PNorm::infinity(), delta), std::invalid_argument);

  using Zone = BInfQDensity::Zone;
  CHECK(m2.classify({0.5, 0.5}) == Zone::A);
  CHECK(m2.classify({1.1, 1.1}) == Zone::B);
  CHECK(m2.classify({1.2, 0.5}) == Zone::C);
  CHECK(m2.classify({0.5, 1.2}) == Zone::D);
  CHECK_THROWS_AS(m2({1.45, 1.45}), std::domain_error);  // beyond the corner cap

  // beta differs between q=1 and q=2 at the same point
  const Point vb{1.2, 1.1};
  CHECK(m1.beta(vb) != doctest::Approx(m2.beta(vb)).epsilon(1e-3));

  // D is the x<->y mirror of C
  CHECK(m2({0.5, 1.2}) == doctest::Approx(m2({1.2, 0.5})).epsilon(1e-12));

  // both q models validated against their numeric oracles on a grid
  for (double qq : {1.0, 2.0}) {
    const BInfQDensity model(PNorm::finite(qq), delta);
    const DensityEvaluator f(SmoothedDist(PNorm::infinity(), PNorm::finite(qq), delta));
    StreamRng rng(SeedSpec{409, (unsigned)qq, 0});
    int used = 0;
    while (used < 100) {
      const Point v{1.5 * rng.next_unit(), 1.5 * rng.next_unit()};
      double fm, fn;
      try {
        fm = model(v);
        fn = f(v);
      } catch (const std::domain_error&) {
        continue;
      }
      if (fn < 1e-9 || fm <= 0.0) continue;
      const double r = fm / fn;
      CHECK(r > 0.2);
      CHECK(r < 5.0);
      ++used;
    }
  }
}

TEST_CASE("free density wrappers mirror the family classes") {
  CHECK(density_b2b2(0.25, 0.1) == doctest::Approx(B2B2Density(0.25)(0.1)));
  CHECK(density_b1b2(0.5, {0.4, 0.2}) == doctest::Approx(B1B2Density(0.5)({0.4, 0.2})));
  CHECK(density_binfq(PNorm::finite(2), 0.5, {1.2, 0.5}) ==
        doctest::Approx(BInfQDensity(PNorm::finite(2), 0.5)({1.2, 0.5})));
}
