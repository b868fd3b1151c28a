#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace minfo {

/// Distance metric used by the neighbor index and the kNN estimators.
enum class Metric { MaxNorm, Euclidean };

double chebyshev_distance(const double* a, const double* b, std::size_t d);
double euclidean_distance(const double* a, const double* b, std::size_t d);
double distance(Metric metric, const double* a, const double* b, std::size_t d);

std::string metric_name(Metric metric);
Metric metric_from_name(std::string_view name);  // throws std::invalid_argument

}  // namespace minfo
