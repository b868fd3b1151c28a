#pragma once

// Independent reference implementations for the test suites. Everything in
// here stays deliberately naive (O(N^2) scans, direct formulas) so it cannot
// share a bug with the library's optimized paths.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "minfo/metric.hpp"
#include "minfo/random.hpp"
#include "minfo/sample_set.hpp"

namespace oracle {

struct Neighbor {
  double dist;
  int id;
  bool operator<(const Neighbor& o) const {
    return dist < o.dist || (dist == o.dist && id < o.id);
  }
};

/// All neighbors of `query`, sorted by (distance, id), optionally keeping
/// the query point itself.
inline std::vector<Neighbor> sorted_neighbors(const minfo::SampleSet& pts, minfo::Metric metric,
                                              int query, bool exclude_self) {
  std::vector<Neighbor> result;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (exclude_self && static_cast<int>(i) == query) continue;
    result.push_back(
        {minfo::distance(metric, pts.row(query), pts.row(i), pts.dim()), static_cast<int>(i)});
  }
  std::sort(result.begin(), result.end());
  return result;
}

inline double kth_distance(const minfo::SampleSet& pts, minfo::Metric metric, int query, int k,
                           bool exclude_self) {
  return sorted_neighbors(pts, metric, query, exclude_self)[k - 1].dist;
}

inline std::vector<int> knn_ids(const minfo::SampleSet& pts, minfo::Metric metric, int query,
                                int k) {
  auto all = sorted_neighbors(pts, metric, query, true);
  std::vector<int> ids;
  for (int i = 0; i < k; ++i) ids.push_back(all[i].id);
  return ids;
}

inline int range_count(const minfo::SampleSet& pts, minfo::Metric metric, int query,
                       double radius, bool strict, bool exclude_self) {
  int count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (exclude_self && static_cast<int>(i) == query) continue;
    const double d = minfo::distance(metric, pts.row(query), pts.row(i), pts.dim());
    if (strict ? d < radius : d <= radius) ++count;
  }
  return count;
}

/// Digamma by downward recurrence from the asymptotic expansion at x + 20.
inline double digamma(double x) {
  double shifted = x + 20.0;
  const double inv = 1.0 / shifted;
  const double inv2 = inv * inv;
  double psi = std::log(shifted) - 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0 -
               inv2 * inv2 * inv2 / 252.0;
  for (int i = 0; i < 20; ++i) psi -= 1.0 / (x + i);
  return psi;
}

/// Differential entropy of a diagonal Gaussian, bits.
inline double gaussian_entropy_bits(const std::vector<double>& sigmas) {
  double h = 0.0;
  for (double s : sigmas) {
    h += 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * s * s);
  }
  return h;
}

inline double gaussian_entropy_bits(std::size_t d, double sigma = 1.0) {
  return gaussian_entropy_bits(std::vector<double>(d, sigma));
}

/// MI of a correlated bivariate Gaussian, bits.
inline double gaussian_mi_bits(double rho) { return -0.5 * std::log2(1.0 - rho * rho); }

/// Uniform points for index stress tests; a fraction of duplicated rows can
/// be requested to exercise tie and zero-distance handling.
inline minfo::SampleSet random_points(minfo::RandomStream& rng, std::size_t n, std::size_t d,
                                      double duplicate_fraction = 0.0) {
  minfo::SampleSet pts(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    if (duplicate_fraction > 0.0 && i > 0 && rng.next_uniform() < duplicate_fraction) {
      const std::size_t src = rng.next_below(i);
      for (std::size_t j = 0; j < d; ++j) pts.at(i, j) = pts.at(src, j);
    } else {
      for (std::size_t j = 0; j < d; ++j) pts.at(i, j) = rng.next_uniform();
    }
  }
  return pts;
}

/// Dyadic-grid points (exact under integer translation) for the exactness
/// invariants.
inline minfo::SampleSet quantized_points(minfo::RandomStream& rng, std::size_t n, std::size_t d) {
  minfo::SampleSet pts(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      pts.at(i, j) = static_cast<double>(rng.next_below(1 << 20)) * 0x1.0p-20;
    }
  }
  return pts;
}

}  // namespace oracle
