#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>

#include "minfo/sample_set.hpp"

namespace minfo {

/// Reproducible random stream. A (seed, stream) pair fully determines the
/// sample sequence; distinct stream ids give statistically independent
/// sequences. Gaussian variates come from inverse-CDF sampling (rational
/// approximation plus one Halley refinement), so the output is a pure
/// function of the underlying integer sequence and stable across builds.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double next_uniform();
  /// Standard normal.
  double next_normal();
  /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> next_cscg(double variance);
  /// Uniform integer in [0, bound), unbiased (rejection on a bitmask).
  std::uint64_t next_below(std::uint64_t bound);

  /// Independent stream derived from this one; deterministic in (this, salt).
  RandomStream child(std::uint64_t salt) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// Inverse of the standard normal CDF on (0, 1).
double inverse_normal_cdf(double p);

/// n i.i.d. Gaussian rows; mean and scale broadcast from size 1 or d.
/// Scales must be positive.
SampleSet sample_gaussian(RandomStream& stream, std::size_t n, std::size_t d,
                          std::span<const double> mean, std::span<const double> scale);

/// 64-bit finalizer used for stream-id derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace minfo
