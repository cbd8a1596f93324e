#include <doctest.h>

#include <chrono>
#include <cmath>

#include "oracles.hpp"
#include "smax/maxima.hpp"
#include "smax/sampling.hpp"

using namespace smax;

TEST_CASE("sample_ball p=inf: coordinates are Uniform[-1,1]") {
  StreamRng rng(SeedSpec{201, 0, 0});
  const long long N = 1000000;
  double sum_x = 0.0;
  for (long long i = 0; i < N; ++i) sum_x += sample_ball(PNorm::infinity(), rng).x;
  const double se = (2.0 / std::sqrt(12.0)) / std::sqrt(static_cast<double>(N));
  CHECK(std::fabs(sum_x / N) < 4.0 * se);
}

TEST_CASE("sample_ball p=2: Pr(||v|| <= 1/2) = 1/4") {
  StreamRng rng(SeedSpec{202, 0, 0});
  const long long N = 1000000;
  long long hits = 0;
  for (long long i = 0; i < N; ++i) {
    const Point v = sample_ball(PNorm::finite(2), rng);
    CHECK(lp_norm(PNorm::finite(2), v) <= 1.0 + 1e-12);
    if (lp_norm(PNorm::finite(2), v) <= 0.5) ++hits;
  }
  const double freq = static_cast<double>(hits) / N;
  const double se = std::sqrt(0.25 * 0.75 / N);
  CHECK(std::fabs(freq - 0.25) < 4.0 * se);
}

TEST_CASE("sample_ball p=1: quadrant probability 1/4") {
  StreamRng rng(SeedSpec{203, 0, 0});
  const long long N = 1000000;
  long long hits = 0;
  for (long long i = 0; i < N; ++i) {
    const Point v = sample_ball(PNorm::finite(1), rng);
    if (v.x >= 0 && v.y >= 0) ++hits;
  }
  const double se = std::sqrt(0.25 * 0.75 / N);
  CHECK(std::fabs(static_cast<double>(hits) / N - 0.25) < 4.0 * se);
}

TEST_CASE("sample_ball uniformity on an axis-aligned box") {
  StreamRng rng(SeedSpec{204, 0, 0});
  const long long N = 1000000;
  // box inside B_2
  const double lo_x = -0.1, hi_x = 0.4, lo_y = 0.2, hi_y = 0.55;
  long long hits = 0;
  for (long long i = 0; i < N; ++i) {
    const Point v = sample_ball(PNorm::finite(2), rng);
    if (v.x >= lo_x && v.x <= hi_x && v.y >= lo_y && v.y <= hi_y) ++hits;
  }
  const double expected = (hi_x - lo_x) * (hi_y - lo_y) / unit_ball_area(PNorm::finite(2));
  const double se = std::sqrt(expected * (1 - expected) / N);
  CHECK(std::fabs(static_cast<double>(hits) / N - expected) < 4.0 * se);
}

TEST_CASE("sample_smoothed: delta=0 equals the plain ball sampler in law") {
  const long long N = 400000;
  StreamRng r1(SeedSpec{205, 0, 0});
  StreamRng r2(SeedSpec{205, 1, 0});
  const SmoothedDist dist(PNorm::finite(1.5), PNorm::finite(2), 0.0);
  std::vector<double> a, b;
  for (long long i = 0; i < N; ++i) {
    a.push_back(sample_smoothed(dist, r1).x);
    b.push_back(sample_ball(PNorm::finite(1.5), r2).x);
  }
  const auto ma = oracles::mean_var(a);
  const auto mb = oracles::mean_var(b);
  const double se_mean = std::sqrt(ma.var / N + mb.var / N);
  CHECK(std::fabs(ma.mean - mb.mean) < 4.0 * se_mean);
  CHECK(ma.var == doctest::Approx(mb.var).epsilon(0.02));
}

TEST_CASE("sample_smoothed p=q=inf: coordinates uncorrelated") {
  StreamRng rng(SeedSpec{206, 0, 0});
  const long long N = 1000000;
  const SmoothedDist dist(PNorm::infinity(), PNorm::infinity(), 0.7);
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (long long i = 0; i < N; ++i) {
    const Point v = sample_smoothed(dist, rng);
    sx += v.x; sy += v.y; sxy += v.x * v.y; sxx += v.x * v.x; syy += v.y * v.y;
  }
  const double mx = sx / N, my = sy / N;
  const double cov = sxy / N - mx * my;
  const double rho = cov / std::sqrt((sxx / N - mx * mx) * (syy / N - my * my));
  CHECK(std::fabs(rho) < 4.0 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("sample_smoothed support bound p=q=2") {
  StreamRng rng(SeedSpec{207, 0, 0});
  const SmoothedDist dist(PNorm::finite(2), PNorm::finite(2), 0.5);
  for (int i = 0; i < 1000000; ++i) {
    CHECK(lp_norm(PNorm::finite(2), sample_smoothed(dist, rng)) <= 1.5 + 1e-12);
  }
}

TEST_CASE("sample_set determinism and stream separation") {
  const SmoothedDist dist(PNorm::finite(1), PNorm::finite(2), 1.0);
  const SeedSpec seed{42, 7, 3};
  const auto a = sample_set(dist, 1000, seed);
  const auto b = sample_set(dist, 1000, seed);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
  const auto c = sample_set(dist, 1000, SeedSpec{42, 7, 4});
  bool differs = false;
  for (size_t i = 0; i < a.size() && !differs; ++i) differs = (a[i].x != c[i].x);
  CHECK(differs);
  CHECK_THROWS_AS(sample_set(dist, 0, seed), std::invalid_argument);
}

TEST_CASE("sample_set of 1e5 points runs well under a second") {
  const SmoothedDist dist(PNorm::finite(1), PNorm::finite(2), 1.0);
  const auto t0 = std::chrono::steady_clock::now();
  const auto pts = sample_set(dist, 100000, SeedSpec{9, 0, 0});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(pts.size() == 100000);
  CHECK(secs < 1.0);
}

TEST_CASE("scaling law: maxima counts for (p,q,delta) and (q,p,1/delta) agree") {
  const int reps = 4000, n = 256;
  const SmoothedDist d1(PNorm::finite(1), PNorm::finite(2), 0.7);
  const SmoothedDist d2(PNorm::finite(2), PNorm::finite(1), 1.0 / 0.7);
  std::vector<int> m1, m2;
  std::vector<double> x1, x2;
  for (int r = 0; r < reps; ++r) {
    m1.push_back(maximal_points(sample_set(d1, n, SeedSpec{31, 0, (unsigned)r})).count);
    m2.push_back(maximal_points(sample_set(d2, n, SeedSpec{31, 1, (unsigned)r})).count);
    x1.push_back(m1.back());
    x2.push_back(m2.back());
  }
  const auto s1 = oracles::mean_var(x1);
  const auto s2 = oracles::mean_var(x2);
  const double pooled = std::sqrt(s1.var / reps + s2.var / reps);
  CHECK(std::fabs(s1.mean - s2.mean) < 3.0 * pooled);
  const double ks = oracles::ks_statistic(m1, m2);
  const double crit = 1.6276 * std::sqrt(2.0 / reps);
  CHECK(ks < crit);
}

TEST_CASE("empirical density is symmetric under coordinate swap and negation") {
  StreamRng rng(SeedSpec{208, 0, 0});
  const SmoothedDist dist(PNorm::finite(2), PNorm::finite(2), 0.3);
  long long quad[4] = {0, 0, 0, 0};
  const long long N = 400000;
  for (long long i = 0; i < N; ++i) {
    const Point v = sample_smoothed(dist, rng);
    const int idx = (v.x < 0 ? 1 : 0) + (v.y < 0 ? 2 : 0);
    ++quad[idx];
  }
  const double expect = N / 4.0;
  double chi2 = 0.0;
  for (long long q : quad) chi2 += (q - expect) * (q - expect) / expect;
  CHECK(chi2 < 11.345);  // chi-square 1% critical value, 3 df

  // swap-symmetry: octant split of the first quadrant
  long long below = 0, above = 0;
  StreamRng rng2(SeedSpec{209, 0, 0});
  for (long long i = 0; i < N; ++i) {
    const Point v = sample_smoothed(dist, rng2);
    if (v.x >= 0 && v.y >= 0) (v.y <= v.x ? below : above) += 1;
  }
  const double tot = static_cast<double>(below + above);
  const double se = std::sqrt(0.25 / tot);
  CHECK(std::fabs(below / tot - 0.5) < 4.0 * se);
}

TEST_CASE("stream derivation is a pure function of the seed triple") {
  CHECK(StreamRng(SeedSpec{1, 2, 3}).key() == StreamRng(SeedSpec{1, 2, 3}).key());
  CHECK(StreamRng(SeedSpec{1, 2, 3}).key() != StreamRng(SeedSpec{1, 2, 4}).key());
  CHECK(StreamRng(SeedSpec{1, 2, 3}).key() != StreamRng(SeedSpec{1, 3, 3}).key());
  CHECK(StreamRng(SeedSpec{2, 2, 3}).key() != StreamRng(SeedSpec{1, 2, 3}).key());
}
