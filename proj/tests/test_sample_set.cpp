#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "minfo/sample_set.hpp"

using namespace minfo;

TEST_CASE("construction and invariants") {
  CHECK_THROWS_AS(SampleSet(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(SampleSet(1, 0), std::invalid_argument);

  SampleSet s = SampleSet::from_rows({1, 2, 3, 4, 5, 6}, 3, 2);
  CHECK(s.size() == 3);
  CHECK(s.dim() == 2);
  CHECK(s.at(2, 1) == 6);

  CHECK_THROWS_AS(SampleSet::from_rows({1, 2, 3}, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(SampleSet::from_rows({1, std::nan("")}, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(SampleSet::from_rows({1, std::numeric_limits<double>::infinity()}, 1, 2),
                  std::invalid_argument);
}

TEST_CASE("complex columns occupy adjacent (re, im) pairs") {
  std::vector<std::complex<double>> sym{{1, 2}, {-3, 0.5}};
  SampleSet s = SampleSet::from_complex(sym);
  CHECK(s.dim() == 2);
  CHECK(s.at(0, 0) == 1);
  CHECK(s.at(0, 1) == 2);
  CHECK(s.complex_at(1) == std::complex<double>(-3, 0.5));
}

TEST_CASE("hcat") {
  SampleSet a = SampleSet::from_rows({1, 2}, 2, 1);
  SampleSet b = SampleSet::from_rows({10, 20, 30, 40}, 2, 2);
  SampleSet j = SampleSet::hcat(a, b);
  CHECK(j.dim() == 3);
  CHECK(j.at(1, 0) == 2);
  CHECK(j.at(1, 2) == 40);

  SampleSet c = SampleSet::from_rows({1}, 1, 1);
  CHECK_THROWS_AS(SampleSet::hcat(a, c), std::invalid_argument);
}

TEST_CASE("columns and select_rows") {
  SampleSet s = SampleSet::from_rows({1, 2, 3, 4, 5, 6}, 2, 3);
  SampleSet c = s.columns(1, 2);
  CHECK(c.dim() == 2);
  CHECK(c.at(0, 0) == 2);
  CHECK(c.at(1, 1) == 6);

  std::vector<std::size_t> rows{1, 0, 1};
  SampleSet r = s.select_rows(rows);
  CHECK(r.size() == 3);
  CHECK(r.at(0, 0) == 4);
  CHECK(r.at(1, 0) == 1);
}

TEST_CASE("mean row power") {
  std::vector<std::complex<double>> sym{{3, 4}, {0, 0}};
  SampleSet s = SampleSet::from_complex(sym);
  CHECK(s.mean_row_power() == doctest::Approx(12.5));
}
