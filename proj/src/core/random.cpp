#include "minfo/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace minfo {
namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed & 0xffffffffu),
      static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream & 0xffffffffu),
      static_cast<std::uint32_t>(stream >> 32),
  };
  return std::mt19937_64(seq);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::next_uniform() {
  // 53-bit mantissa, offset by half an ulp so 0 and 1 are unreachable.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::next_normal() { return inverse_normal_cdf(next_uniform()); }

std::complex<double> RandomStream::next_cscg(double variance) {
  if (variance < 0.0) throw std::domain_error("next_cscg: variance must be >= 0");
  const double s = std::sqrt(0.5 * variance);
  const double re = next_normal();
  const double im = next_normal();
  return {s * re, s * im};
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::domain_error("next_below: bound must be positive");
  if ((bound & (bound - 1)) == 0) return engine_() & (bound - 1);
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  std::uint64_t v;
  do {
    v = engine_() & mask;
  } while (v >= bound);
  return v;
}

RandomStream RandomStream::child(std::uint64_t salt) const {
  return RandomStream(seed_, splitmix64(stream_ ^ splitmix64(salt + 0x517cc1b727220a95ULL)));
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse_normal_cdf: p must be in (0,1)");

  // Acklam's rational approximation, then one Halley step via erfc to reach
  // full double precision.
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

SampleSet sample_gaussian(RandomStream& stream, std::size_t n, std::size_t d,
                          std::span<const double> mean, std::span<const double> scale) {
  if (n < 1 || d < 1) throw std::invalid_argument("sample_gaussian: n and d must be >= 1");
  auto pick = [d](std::span<const double> v, std::size_t j, const char* what) {
    if (v.size() != 1 && v.size() != d) {
      throw std::invalid_argument(std::string("sample_gaussian: ") + what +
                                  " must have size 1 or d");
    }
    return v.size() == 1 ? v[0] : v[j];
  };
  for (std::size_t j = 0; j < scale.size(); ++j) {
    if (!(scale[j] > 0.0)) throw std::invalid_argument("sample_gaussian: scales must be > 0");
  }
  SampleSet out(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out.at(i, j) = pick(mean, j, "mean") + pick(scale, j, "scale") * stream.next_normal();
    }
  }
  return out;
}

}  // namespace minfo
