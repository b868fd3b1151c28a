#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "minfo/neighbor_index.hpp"
#include "minfo/random.hpp"
#include "oracles.hpp"

using namespace minfo;

namespace {

const std::vector<IndexStructure> kAllStructures = {
    IndexStructure::BruteForce, IndexStructure::KdTree, IndexStructure::VpTree};

SampleSet line_points() { return SampleSet::from_rows({0.0, 1.0, 3.0}, 3, 1); }

}  // namespace

TEST_CASE("hand-checked 1-D examples") {
  for (auto structure : kAllStructures) {
    NeighborIndex idx = NeighborIndex::build(line_points(), Metric::MaxNorm, structure);
    CHECK(idx.size() == 3);
    CHECK(idx.kth_distance(0, 1) == 1.0);
    CHECK(idx.kth_distance(1, 1) == 1.0);
    CHECK(idx.kth_distance(2, 1) == 2.0);
    CHECK(idx.kth_distance(0, 2) == 3.0);

    // query 1, radius 1.5 strict: only point 0 (point 2 sits at distance 2)
    CHECK(idx.range_count(1, 1.5, RangeBoundary::Strict) == 1);
    CHECK(idx.range_count(1, 0.0, RangeBoundary::Strict) == 0);
    CHECK(idx.range_count(0, 0.0, RangeBoundary::Strict) == 0);
    CHECK(idx.range_count(1, 1.0, RangeBoundary::Strict) == 0);
    CHECK(idx.range_count(1, 1.0, RangeBoundary::Inclusive) == 1);

    const auto ids = idx.knn_ids(2, 2);
    CHECK(ids == std::vector<int>{1, 0});
  }
}

TEST_CASE("equidistant ties break to the lower id") {
  SampleSet pts = SampleSet::from_rows({0.0, 1.0, 2.0}, 3, 1);
  for (auto structure : kAllStructures) {
    NeighborIndex idx = NeighborIndex::build(pts, Metric::MaxNorm, structure);
    const auto ids = idx.knn_ids(1, 2);
    CHECK(ids == std::vector<int>{0, 2});
    CHECK(idx.knn_ids(1, 1) == std::vector<int>{0});
  }
}

TEST_CASE("build and query argument checks") {
  CHECK_THROWS_AS(NeighborIndex::build(SampleSet::from_rows({1.0}, 1, 1), Metric::MaxNorm),
                  std::invalid_argument);
  NeighborIndex idx = NeighborIndex::build(line_points(), Metric::MaxNorm);
  CHECK_THROWS_AS(idx.kth_distance(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(idx.kth_distance(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(idx.kth_distance(5, 1), std::invalid_argument);
  CHECK_THROWS_AS(idx.range_count(0, -1.0, RangeBoundary::Strict), std::domain_error);
  CHECK(idx.kth_distance(0, 3, false) == 3.0);  // self included as neighbor #1
  CHECK(idx.kth_distance(0, 1, false) == 0.0);
}

TEST_CASE("duplicate points are allowed and give zero distances") {
  SampleSet pts = SampleSet::from_rows({1.0, 1.0, 1.0, 5.0}, 4, 1);
  for (auto structure : kAllStructures) {
    NeighborIndex idx = NeighborIndex::build(pts, Metric::MaxNorm, structure);
    CHECK(idx.kth_distance(0, 1) == 0.0);
    CHECK(idx.kth_distance(0, 2) == 0.0);
    CHECK(idx.kth_distance(0, 3) == 4.0);
    CHECK(idx.knn_ids(0, 2) == std::vector<int>{1, 2});
    CHECK(idx.range_count(0, 0.0, RangeBoundary::Inclusive) == 2);
  }
}

TEST_CASE("oracle equivalence on random instances") {
  RandomStream rng(20240601, 0);
  const std::vector<std::size_t> dims = {1, 2, 4, 8, 44};
  for (int instance = 0; instance < 30; ++instance) {
    const std::size_t d = dims[instance % dims.size()];
    const std::size_t n = 40 + rng.next_below(160);
    const double dup = instance % 3 == 0 ? 0.1 : 0.0;
    SampleSet pts = oracle::random_points(rng, n, d, dup);
    const Metric metric = instance % 2 == 0 ? Metric::MaxNorm : Metric::Euclidean;

    for (auto structure : kAllStructures) {
      NeighborIndex idx = NeighborIndex::build(pts, metric, structure);
      for (int rep = 0; rep < 8; ++rep) {
        const int q = static_cast<int>(rng.next_below(n));
        const int k = 1 + static_cast<int>(rng.next_below(std::min<std::size_t>(n - 1, 12)));

        CHECK(idx.kth_distance(q, k) == oracle::kth_distance(pts, metric, q, k, true));
        CHECK(idx.knn_ids(q, k) == oracle::knn_ids(pts, metric, q, k));

        const double radius = oracle::kth_distance(pts, metric, q, k, true) *
                              (0.25 + 1.5 * rng.next_uniform());
        CHECK(idx.range_count(q, radius, RangeBoundary::Strict) ==
              oracle::range_count(pts, metric, q, radius, true, true));
        CHECK(idx.range_count(q, radius, RangeBoundary::Inclusive) ==
              oracle::range_count(pts, metric, q, radius, false, true));
        // boundary exactly on a realized distance
        CHECK(idx.range_count(q, radius, RangeBoundary::Strict, false) ==
              oracle::range_count(pts, metric, q, radius, true, false));
        const double exact = oracle::kth_distance(pts, metric, q, k, true);
        CHECK(idx.range_count(q, exact, RangeBoundary::Strict) ==
              oracle::range_count(pts, metric, q, exact, true, true));
        CHECK(idx.range_count(q, exact, RangeBoundary::Inclusive) ==
              oracle::range_count(pts, metric, q, exact, false, true));
      }
    }
  }
}

TEST_CASE("monotonicity and internal consistency") {
  RandomStream rng(7, 1);
  SampleSet pts = oracle::random_points(rng, 300, 3);
  NeighborIndex idx = NeighborIndex::build(pts, Metric::MaxNorm);
  for (int q = 0; q < 50; ++q) {
    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double dist = idx.kth_distance(q, k);
      CHECK(dist >= prev);
      prev = dist;
    }
    const double d5 = idx.kth_distance(q, 5);
    CHECK(idx.range_count(q, d5, RangeBoundary::Strict) <= 4);
    CHECK(idx.range_count(q, d5, RangeBoundary::Inclusive) >= 5);
    CHECK(idx.range_count(q, 0.1, RangeBoundary::Strict) <=
          idx.range_count(q, 0.2, RangeBoundary::Strict));
  }
}

TEST_CASE("permutation of insertion order leaves answers unchanged") {
  RandomStream rng(11, 2);
  const std::size_t n = 200;
  SampleSet pts = oracle::random_points(rng, n, 4);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.next_below(i + 1)]);
  }
  SampleSet shuffled = pts.select_rows(perm);

  NeighborIndex base = NeighborIndex::build(pts, Metric::Euclidean);
  NeighborIndex permuted = NeighborIndex::build(shuffled, Metric::Euclidean);
  for (std::size_t i = 0; i < n; ++i) {
    // row i of `shuffled` is row perm[i] of `pts`
    CHECK(permuted.kth_distance(static_cast<int>(i), 3) ==
          base.kth_distance(static_cast<int>(perm[i]), 3));
    CHECK(permuted.range_count(static_cast<int>(i), 0.25, RangeBoundary::Strict) ==
          base.range_count(static_cast<int>(perm[i]), 0.25, RangeBoundary::Strict));
  }
}

TEST_CASE("structure heuristic picks kd-tree in low dimensions") {
  RandomStream rng(3, 3);
  SampleSet low = oracle::random_points(rng, 2000, 4);
  CHECK(NeighborIndex::build(low, Metric::MaxNorm).structure() == IndexStructure::KdTree);

  SampleSet high = oracle::random_points(rng, 600, 20);
  CHECK(NeighborIndex::build(high, Metric::MaxNorm).structure() == IndexStructure::BruteForce);

  SampleSet big_high = oracle::random_points(rng, 3000, 20);
  const auto s = NeighborIndex::build(big_high, Metric::MaxNorm).structure();
  CHECK((s == IndexStructure::VpTree || s == IndexStructure::BruteForce));
}
