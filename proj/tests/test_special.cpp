#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "minfo/special.hpp"
#include "oracles.hpp"

using namespace minfo;

TEST_CASE("digamma reference values") {
  CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));
  CHECK(digamma(2.0) == doctest::Approx(0.4227843350984671).epsilon(1e-12));
  // oracle: downward recurrence from the asymptotic series at x + 20
  CHECK(std::fabs(oracle::digamma(10.0) - 2.2517525890667211) < 1e-12);
  CHECK(std::fabs(digamma(10.0) - 2.2517525890667211) < 1e-12);
  CHECK(std::fabs(digamma(0.5) - oracle::digamma(0.5)) < 1e-12);
  CHECK(std::fabs(digamma(1234.5) - oracle::digamma(1234.5)) < 1e-12);
}

TEST_CASE("digamma recurrence psi(x+1) = psi(x) + 1/x") {
  for (double x = 0.5; x <= 100.0; x += 0.37) {
    CHECK(std::fabs(digamma(x + 1.0) - digamma(x) - 1.0 / x) <= 1e-12);
  }
}

TEST_CASE("digamma domain") {
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(digamma(-3.0), std::domain_error);
}

TEST_CASE("unit ball volumes") {
  CHECK(log2_unit_ball_volume(2, Metric::Euclidean, BallConvention::Radius) ==
        doctest::Approx(1.6514961294723188).epsilon(1e-12));
  CHECK(log2_unit_ball_volume(3, Metric::MaxNorm, BallConvention::Radius) == 3.0);
  CHECK(log2_unit_ball_volume(5, Metric::MaxNorm, BallConvention::Diameter) == 0.0);
  for (int d = 1; d <= 64; ++d) {
    CHECK(log2_unit_ball_volume(d, Metric::MaxNorm, BallConvention::Radius) ==
          static_cast<double>(d));
  }
  // diameter = radius - d in log2, both metrics
  for (int d : {1, 2, 7, 20}) {
    const double r = log2_unit_ball_volume(d, Metric::Euclidean, BallConvention::Radius);
    const double dia = log2_unit_ball_volume(d, Metric::Euclidean, BallConvention::Diameter);
    CHECK(r - dia == doctest::Approx(d).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log2_unit_ball_volume(0, Metric::MaxNorm, BallConvention::Radius),
                  std::domain_error);
}

TEST_CASE("awgn capacity") {
  CHECK(awgn_capacity_bits(0.0) == 0.0);
  CHECK(awgn_capacity_bits(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(awgn_capacity_bits(std::pow(10.0, 2.5)) ==
        doctest::Approx(8.3093752412128049).epsilon(1e-12));
  CHECK_THROWS_AS(awgn_capacity_bits(-0.1), std::domain_error);
}

TEST_CASE("half-Gaussian bound") {
  CHECK(half_gaussian_bound_bits(2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(half_gaussian_bound_bits(1000.0) ==
        doctest::Approx(4.4828921423310435).epsilon(1e-12));
  CHECK(half_gaussian_bound_bits(1.0) == 0.0);  // clamped from -1/2
  CHECK(half_gaussian_bound_bits(0.5) == 0.0);
  CHECK_THROWS_AS(half_gaussian_bound_bits(0.0), std::domain_error);
  CHECK_THROWS_AS(half_gaussian_bound_bits(-1.0), std::domain_error);
}

TEST_CASE("half-Gaussian bound never exceeds capacity at snr >= 1") {
  for (double db = 0.0; db <= 40.0; db += 0.5) {
    const double snr = std::pow(10.0, db / 10.0);
    CHECK(half_gaussian_bound_bits(snr) <= awgn_capacity_bits(snr));
  }
}

TEST_CASE("metric axioms on random triples") {
  RandomStream rng(42, 7);
  for (Metric metric : {Metric::MaxNorm, Metric::Euclidean}) {
    for (int trial = 0; trial < 10000; ++trial) {
      double a[3], b[3], c[3];
      for (int j = 0; j < 3; ++j) {
        a[j] = rng.next_uniform() * 4 - 2;
        b[j] = rng.next_uniform() * 4 - 2;
        c[j] = rng.next_uniform() * 4 - 2;
      }
      const double dab = distance(metric, a, b, 3);
      const double dba = distance(metric, b, a, 3);
      const double dac = distance(metric, a, c, 3);
      const double dcb = distance(metric, c, b, 3);
      CHECK(dab >= 0.0);
      CHECK(dab == dba);
      CHECK(distance(metric, a, a, 3) == 0.0);
      CHECK(dab <= dac + dcb + 1e-15);
    }
  }
}
