#include "minfo/sample_set.hpp"

#include <cmath>
#include <stdexcept>

namespace minfo {

SampleSet::SampleSet(std::size_t n, std::size_t dim)
    : n_(n), d_(dim), data_(n * dim, 0.0) {
  if (n == 0 || dim == 0) throw std::invalid_argument("SampleSet: n and dim must be >= 1");
}

SampleSet SampleSet::from_rows(std::vector<double> data, std::size_t n, std::size_t dim) {
  if (n == 0 || dim == 0) throw std::invalid_argument("SampleSet: n and dim must be >= 1");
  if (data.size() != n * dim) throw std::invalid_argument("SampleSet: data size != n*dim");
  SampleSet s;
  s.n_ = n;
  s.d_ = dim;
  s.data_ = std::move(data);
  s.validate();
  return s;
}

SampleSet SampleSet::from_complex(std::span<const std::complex<double>> symbols) {
  if (symbols.empty()) throw std::invalid_argument("SampleSet: empty symbol sequence");
  SampleSet s(symbols.size(), 2);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    s.at(i, 0) = symbols[i].real();
    s.at(i, 1) = symbols[i].imag();
  }
  s.validate();
  return s;
}

SampleSet SampleSet::hcat(const SampleSet& a, const SampleSet& b) {
  if (a.size() != b.size()) throw std::invalid_argument("SampleSet::hcat: row counts differ");
  SampleSet out(a.size(), a.dim() + b.dim());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double* dst = out.row(i);
    const double* pa = a.row(i);
    const double* pb = b.row(i);
    for (std::size_t j = 0; j < a.dim(); ++j) dst[j] = pa[j];
    for (std::size_t j = 0; j < b.dim(); ++j) dst[a.dim() + j] = pb[j];
  }
  return out;
}

SampleSet SampleSet::columns(std::size_t first, std::size_t count) const {
  if (first + count > d_) throw std::invalid_argument("SampleSet::columns: out of range");
  SampleSet out(n_, count);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* src = row(i) + first;
    double* dst = out.row(i);
    for (std::size_t j = 0; j < count; ++j) dst[j] = src[j];
  }
  return out;
}

SampleSet SampleSet::select_rows(std::span<const std::size_t> rows) const {
  if (rows.empty()) throw std::invalid_argument("SampleSet::select_rows: empty selection");
  SampleSet out(rows.size(), d_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= n_) throw std::invalid_argument("SampleSet::select_rows: row out of range");
    const double* src = row(rows[i]);
    double* dst = out.row(i);
    for (std::size_t j = 0; j < d_; ++j) dst[j] = src[j];
  }
  return out;
}

double SampleSet::mean_row_power() const {
  double acc = 0.0;
  for (double v : data_) acc += v * v;
  return acc / static_cast<double>(n_);
}

void SampleSet::validate() const {
  if (n_ == 0 || d_ == 0) throw std::invalid_argument("SampleSet: empty");
  for (double v : data_) {
    if (!std::isfinite(v)) throw std::invalid_argument("SampleSet: non-finite entry");
  }
}

}  // namespace minfo
