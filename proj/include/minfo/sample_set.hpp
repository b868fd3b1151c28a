#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace minfo {

/// N samples of a d-dimensional real random vector, row-major contiguous.
/// Complex symbols are stored as (re, im) column pairs; the estimators only
/// ever see real coordinates. Immutable by convention once handed to an
/// index or estimator.
class SampleSet {
 public:
  SampleSet() : n_(0), d_(0) {}
  SampleSet(std::size_t n, std::size_t dim);

  /// Takes ownership of row-major data; throws on size mismatch, empty set,
  /// or a non-finite entry.
  static SampleSet from_rows(std::vector<double> data, std::size_t n, std::size_t dim);
  static SampleSet from_complex(std::span<const std::complex<double>> symbols);
  /// Column concatenation (the joint set of Eq.-style (X, Y) pairs).
  static SampleSet hcat(const SampleSet& a, const SampleSet& b);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }

  double* row(std::size_t i) { return data_.data() + i * d_; }
  const double* row(std::size_t i) const { return data_.data() + i * d_; }
  double& at(std::size_t i, std::size_t j) { return data_[i * d_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * d_ + j]; }

  std::complex<double> complex_at(std::size_t i, std::size_t pair = 0) const {
    return {at(i, 2 * pair), at(i, 2 * pair + 1)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  /// Copy of columns [first, first + count).
  SampleSet columns(std::size_t first, std::size_t count) const;
  /// Copy of the given rows, in the given order.
  SampleSet select_rows(std::span<const std::size_t> rows) const;

  /// Mean of sum of squares across all coordinates of a row (complex power
  /// when the set holds complex pairs).
  double mean_row_power() const;

  /// Throws std::invalid_argument if empty or any entry is NaN/Inf.
  void validate() const;

 private:
  std::size_t n_, d_;
  std::vector<double> data_;
};

}  // namespace minfo
