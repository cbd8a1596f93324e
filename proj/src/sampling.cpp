#include "smax/sampling.hpp"

#include <stdexcept>

namespace smax {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

StreamRng::StreamRng(const SeedSpec& seed) {
  std::uint64_t k = mix64(seed.master_seed);
  k = mix64(k ^ mix64(seed.cell_index + 0xA5A5A5A5A5A5A5A5ull));
  k = mix64(k ^ mix64(seed.replicate_index + 0xC3C3C3C3C3C3C3C3ull));
  key_ = k;
}

Point sample_ball(const PNorm& p, StreamRng& rng) {
  if (p.is_infinite()) {
    return {rng.next_symmetric(), rng.next_symmetric()};
  }
  for (;;) {
    const Point v{rng.next_symmetric(), rng.next_symmetric()};
    if (lp_norm(p, v) <= 1.0) return v;
  }
}

Point sample_smoothed(const SmoothedDist& dist, StreamRng& rng) {
  const Point u = sample_ball(dist.p, rng);
  if (dist.delta == 0.0) return u;
  const Point w = sample_ball(dist.q, rng);
  return {u.x + dist.delta * w.x, u.y + dist.delta * w.y};
}

std::vector<Point> sample_set(const SmoothedDist& dist, int n, const SeedSpec& seed) {
  if (n < 1) throw std::invalid_argument("sample_set: n must be >= 1");
  StreamRng rng(seed);
  std::vector<Point> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(sample_smoothed(dist, rng));
  return out;
}

}  // namespace smax
