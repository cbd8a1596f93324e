#pragma once

#include <cstdint>
#include <vector>

#include "smax/geometry.hpp"

// Reproducible generation of points from B_p, delta*B_q and the convolution
// B_p + delta*B_q. Streams are derived from (master_seed, cell, replicate)
// by a counter-mode hash, so replications are parallelizable with
// order-independent reproducibility.

namespace smax {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t cell_index = 0;
  std::uint64_t replicate_index = 0;
};

// splitmix64 finalizer; the documented mixing primitive for stream derivation.
std::uint64_t mix64(std::uint64_t z);

// Counter-mode generator: key = chained mix of the seed triple, output i is
// mix64(key + i * golden). Single-owner; construct one per logical stream.
class StreamRng {
 public:
  explicit StreamRng(const SeedSpec& seed);

  std::uint64_t next_u64() { return mix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ull); }

  // Uniform in [0, 1).
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [-1, 1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Uniform point on B_p by rejection from [-1,1]^2 (acceptance a_p/4 >= 1/2).
Point sample_ball(const PNorm& p, StreamRng& rng);

// u + delta*w with u ~ Uniform(B_p), w ~ Uniform(B_q) independent.
Point sample_smoothed(const SmoothedDist& dist, StreamRng& rng);

// Deterministic function of (dist, n, seed); replays bit-identically.
std::vector<Point> sample_set(const SmoothedDist& dist, int n, const SeedSpec& seed);

}  // namespace smax
