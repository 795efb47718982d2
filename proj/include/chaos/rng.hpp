#pragma once

#include <cstdint>
#include <vector>

namespace chaos {

// Counter-based random generator: every variate is a pure function of
// (seed, stream, index).  Draws can be regenerated in isolation and in any
// order, so parallel and serial sampling produce identical streams.
//
// Normal variates use the inverse CDF (Wichura's AS241 rational fit), which
// is deterministic across platforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Derives an independent generator for a sub-experiment.
  CounterRng fork(std::uint64_t tag) const;

  // Uniform on the open interval (0,1).
  double uniform(std::uint64_t stream, std::uint64_t index) const;

  // Standard normal variate.
  double normal(std::uint64_t stream, std::uint64_t index) const;

  // n independent standard normals at indices index0, index0+1, ...
  std::vector<double> normal_vector(std::uint64_t stream, std::size_t n,
                                    std::uint64_t index0 = 0) const;

 private:
  std::uint64_t seed_;
};

// Stream id for the Gaussian vector of a given (draw, slot) pair.  Slots are
// 1-based and at most 63 per draw.
constexpr std::uint64_t slot_stream(std::uint64_t draw, int slot) {
  return draw * 64 + static_cast<std::uint64_t>(slot);
}

// 64-bit mixing of two words (stateless, used for seed derivation).
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

// Inverse of the standard normal CDF for p in (0,1).
double normal_quantile(double p);

// Uniform point in radius * B^n (normal direction, power-law radius); uses
// counter indices 0..n of the given stream.
std::vector<double> ball_point(const CounterRng& rng, std::uint64_t stream, std::size_t n,
                               double radius);

}  // namespace chaos
