#include "minfo/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace minfo {

double chebyshev_distance(const double* a, const double* b, std::size_t d) {
  double m = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double v = std::fabs(a[j] - b[j]);
    if (v > m) m = v;
  }
  return m;
}

double euclidean_distance(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double v = a[j] - b[j];
    s += v * v;
  }
  return std::sqrt(s);
}

double distance(Metric metric, const double* a, const double* b, std::size_t d) {
  return metric == Metric::MaxNorm ? chebyshev_distance(a, b, d)
                                   : euclidean_distance(a, b, d);
}

std::string metric_name(Metric metric) {
  return metric == Metric::MaxNorm ? "max-norm" : "euclidean";
}

Metric metric_from_name(std::string_view name) {
  if (name == "max-norm" || name == "chebyshev" || name == "maxnorm") return Metric::MaxNorm;
  if (name == "euclidean" || name == "l2") return Metric::Euclidean;
  throw std::invalid_argument("unknown metric: " + std::string(name));
}

}  // namespace minfo
