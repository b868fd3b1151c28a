#include "minfo/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace minfo {

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: argument must be positive");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // ln x - 1/(2x) - sum_{n>=1} B_{2n} / (2n x^{2n})
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double ln_unit_ball_volume(int d, Metric metric, BallConvention convention) {
  if (d < 1) throw std::domain_error("unit ball volume: dimension must be >= 1");
  double ln_radius_volume;
  if (metric == Metric::MaxNorm) {
    ln_radius_volume = d * std::numbers::ln2;  // cube of side 2
  } else {
    ln_radius_volume = 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
  }
  if (convention == BallConvention::Diameter) ln_radius_volume -= d * std::numbers::ln2;
  return ln_radius_volume;
}

double log2_unit_ball_volume(int d, Metric metric, BallConvention convention) {
  if (d < 1) throw std::domain_error("unit ball volume: dimension must be >= 1");
  if (metric == Metric::MaxNorm) {
    // exact integers, no roundoff
    return convention == BallConvention::Radius ? static_cast<double>(d) : 0.0;
  }
  return ln_unit_ball_volume(d, metric, convention) / std::numbers::ln2;
}

double awgn_capacity_bits(double snr) {
  if (snr < 0.0 || std::isnan(snr)) throw std::domain_error("awgn_capacity: snr must be >= 0");
  return std::log2(1.0 + snr);
}

double half_gaussian_bound_bits(double snr) {
  if (!(snr > 0.0)) throw std::domain_error("half_gaussian_bound: snr must be > 0");
  double v = 0.5 * std::log2(snr) - 0.5;
  return v > 0.0 ? v : 0.0;
}

}  // namespace minfo
