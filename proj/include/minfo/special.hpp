#pragma once

#include "minfo/metric.hpp"

namespace minfo {

/// Convention defining what "unit ball" means when its volume enters an
/// entropy formula together with a neighbor distance.
enum class BallConvention {
  Radius,    // ball of radius 1, paired with epsilon = neighbor distance
  Diameter,  // ball of diameter 1, paired with epsilon = 2 * neighbor distance
};

inline constexpr double kEulerMascheroni = 0.57721566490153286060651209;

/// Digamma function, natural-log units. Throws std::domain_error for x <= 0.
/// Absolute error below 1e-13 for x >= 1 (recurrence up to x >= 10, then the
/// Bernoulli asymptotic series through the x^-12 term).
double digamma(double x);

/// log2 of the d-dimensional unit-ball volume under the given metric and
/// convention. Exact for the max-norm (d and 0 respectively).
double log2_unit_ball_volume(int d, Metric metric, BallConvention convention);

/// Same in natural-log units (what the entropy accumulators use internally).
double ln_unit_ball_volume(int d, Metric metric, BallConvention convention);

/// AWGN channel capacity log2(1 + snr), bits per complex symbol.
/// Throws std::domain_error for snr < 0.
double awgn_capacity_bits(double snr);

/// High-power capacity lower bound max(0, 0.5*log2(snr) - 0.5), bits.
/// Throws std::domain_error for snr <= 0.
double half_gaussian_bound_bits(double snr);

}  // namespace minfo
