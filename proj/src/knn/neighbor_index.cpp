#include "minfo/neighbor_index.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace minfo {
namespace {

constexpr int kLeafSize = 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Candidate {
  double dist;
  int id;
  // lexicographic (distance, id): the heap top is the current worst keeper
  bool operator<(const Candidate& o) const {
    return dist < o.dist || (dist == o.dist && id < o.id);
  }
};

/// Bounded best-k collector (max-heap on (dist, id)).
class BestK {
 public:
  explicit BestK(int k) : k_(static_cast<std::size_t>(k)) { heap_.reserve(k_ + 1); }

  void offer(double dist, int id) {
    if (heap_.size() < k_) {
      heap_.push_back({dist, id});
      std::push_heap(heap_.begin(), heap_.end());
    } else if (Candidate{dist, id} < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = {dist, id};
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  bool full() const { return heap_.size() == k_; }
  /// Pruning bound: subtrees whose minimum possible distance exceeds this
  /// strictly can be skipped. Ties must still be visited (id tie-break).
  double bound() const { return full() ? heap_.front().dist : kInf; }

  std::vector<Candidate> take_sorted() {
    std::sort_heap(heap_.begin(), heap_.end());
    return std::move(heap_);
  }

 private:
  std::size_t k_;
  std::vector<Candidate> heap_;
};

// ---- metric kernels ------------------------------------------------------

struct ChebOps {
  static double dist(const double* a, const double* b, std::size_t d) {
    return chebyshev_distance(a, b, d);
  }
  // early exit once the partial max strictly exceeds `bound`; the return
  // value is then only guaranteed to be > bound
  static double dist_bounded(const double* a, const double* b, std::size_t d, double bound) {
    double m = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double v = std::fabs(a[j] - b[j]);
      if (v > m) {
        m = v;
        if (m > bound) return m;
      }
    }
    return m;
  }
  static double box_lb(const double* q, const double* lo, const double* hi, std::size_t d) {
    double m = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double g = lo[j] - q[j];
      double g2 = q[j] - hi[j];
      if (g2 > g) g = g2;
      if (g > m) m = g;
    }
    return m;
  }
  static double box_ub(const double* q, const double* lo, const double* hi, std::size_t d) {
    double m = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double v = std::max(std::fabs(q[j] - lo[j]), std::fabs(hi[j] - q[j]));
      if (v > m) m = v;
    }
    return m;
  }
};

struct EuclOps {
  static double dist(const double* a, const double* b, std::size_t d) {
    return euclidean_distance(a, b, d);
  }
  // Accumulates in the same order as euclidean_distance so that completed
  // results are bit-identical to the canonical distance. Early rejection
  // uses an inflated threshold: it only fires when the canonical distance is
  // certainly above `bound`, and then reports infinity.
  static double dist_bounded(const double* a, const double* b, std::size_t d, double bound) {
    if (std::isinf(bound)) return euclidean_distance(a, b, d);
    const double b2 = bound * bound * (1.0 + 1e-12) + 1e-300;
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double v = a[j] - b[j];
      s += v * v;
      if (s > b2) return kInf;
    }
    return std::sqrt(s);
  }
  static double box_lb(const double* q, const double* lo, const double* hi, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double g = std::max({lo[j] - q[j], q[j] - hi[j], 0.0});
      s += g * g;
    }
    return std::sqrt(s);
  }
  static double box_ub(const double* q, const double* lo, const double* hi, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double v = std::max(std::fabs(q[j] - lo[j]), std::fabs(hi[j] - q[j]));
      s += v * v;
    }
    return std::sqrt(s);
  }
};

struct KdNode {
  int left = -1, right = -1;  // -1,-1 for leaves
  int begin = 0, end = 0;     // range into kd_order (contiguous per subtree)
};

struct VpNode {
  int size = 0;
  int leaf_begin = -1, leaf_end = -1;  // range into vp_order when leaf
  int vantage = -1;
  int inner = -1, outer = -1;
  double inner_min = 0, inner_max = 0;  // child distance ranges to vantage
  double outer_min = 0, outer_max = 0;
};

bool qualifies(double dist, double radius, RangeBoundary b) {
  return b == RangeBoundary::Strict ? dist < radius : dist <= radius;
}

}  // namespace

// ---- Impl ----------------------------------------------------------------

struct NeighborIndex::Impl {
  std::size_t n = 0, d = 0;
  Metric metric = Metric::MaxNorm;
  IndexStructure structure = IndexStructure::BruteForce;
  std::vector<double> pts;  // original order, row-major n*d

  // kd-tree
  std::vector<KdNode> kd_nodes;
  std::vector<double> kd_boxlo, kd_boxhi;  // per node, d each
  std::vector<int> kd_order;               // node ranges index this
  std::vector<double> kd_pts;              // points in kd_order layout

  // vp-tree
  std::vector<VpNode> vp_nodes;
  std::vector<int> vp_order;

  const double* point(int id) const { return pts.data() + static_cast<std::size_t>(id) * d; }

  void build_kd();
  int build_kd_node(int begin, int end);
  void build_vp();
  int build_vp_node(std::vector<int>& ids, int begin, int end);

  template <typename Ops>
  void knn_brute(const double* q, int self, BestK& best) const;
  template <typename Ops>
  void knn_kd(int node, const double* q, int self, BestK& best) const;
  template <typename Ops>
  void knn_vp(int node, const double* q, int self, BestK& best) const;

  template <typename Ops>
  int count_brute(const double* q, double radius, RangeBoundary b) const;
  template <typename Ops>
  int count_kd(int node, const double* q, double radius, RangeBoundary b) const;
  template <typename Ops>
  int count_vp(int node, const double* q, double radius, RangeBoundary b) const;

  template <typename Ops>
  BestK run_knn(int query, int k, bool exclude_self) const;
  template <typename Ops>
  int run_count(int query, double radius, RangeBoundary b) const;
};

void NeighborIndex::Impl::build_kd() {
  kd_order.resize(n);
  std::iota(kd_order.begin(), kd_order.end(), 0);
  kd_nodes.reserve(2 * n / kLeafSize + 4);
  build_kd_node(0, static_cast<int>(n));
  kd_pts.resize(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const double* src = point(kd_order[i]);
    std::copy(src, src + d, kd_pts.begin() + i * d);
  }
}

int NeighborIndex::Impl::build_kd_node(int begin, int end) {
  const int node_id = static_cast<int>(kd_nodes.size());
  kd_nodes.push_back({});
  kd_nodes[node_id].begin = begin;
  kd_nodes[node_id].end = end;
  kd_boxlo.resize(kd_nodes.size() * d);
  kd_boxhi.resize(kd_nodes.size() * d);
  double* lo = kd_boxlo.data() + static_cast<std::size_t>(node_id) * d;
  double* hi = kd_boxhi.data() + static_cast<std::size_t>(node_id) * d;
  std::fill(lo, lo + d, kInf);
  std::fill(hi, hi + d, -kInf);
  for (int i = begin; i < end; ++i) {
    const double* p = point(kd_order[i]);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  std::size_t split_dim = 0;
  double widest = -1.0;
  for (std::size_t j = 0; j < d; ++j) {
    double w = hi[j] - lo[j];
    if (w > widest) {
      widest = w;
      split_dim = j;
    }
  }
  // all-duplicate ranges cannot be split
  if (end - begin <= kLeafSize || widest <= 0.0) return node_id;

  const int mid = begin + (end - begin) / 2;
  auto cmp = [this, split_dim](int a, int b) {
    double va = point(a)[split_dim], vb = point(b)[split_dim];
    return va < vb || (va == vb && a < b);
  };
  std::nth_element(kd_order.begin() + begin, kd_order.begin() + mid, kd_order.begin() + end, cmp);
  int left = build_kd_node(begin, mid);
  int right = build_kd_node(mid, end);
  kd_nodes[node_id].left = left;
  kd_nodes[node_id].right = right;
  return node_id;
}

void NeighborIndex::Impl::build_vp() {
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  vp_order.reserve(n);
  vp_nodes.reserve(2 * n / kLeafSize + 4);
  build_vp_node(ids, 0, static_cast<int>(n));
}

int NeighborIndex::Impl::build_vp_node(std::vector<int>& ids, int begin, int end) {
  const int node_id = static_cast<int>(vp_nodes.size());
  vp_nodes.push_back({});
  vp_nodes[node_id].size = end - begin;

  auto make_leaf = [&] {
    vp_nodes[node_id].leaf_begin = static_cast<int>(vp_order.size());
    for (int i = begin; i < end; ++i) vp_order.push_back(ids[i]);
    vp_nodes[node_id].leaf_end = static_cast<int>(vp_order.size());
  };
  if (end - begin <= kLeafSize) {
    make_leaf();
    return node_id;
  }

  // vantage: point farthest from the subset centroid, ties to the lower id
  std::vector<double> centroid(d, 0.0);
  for (int i = begin; i < end; ++i) {
    const double* p = point(ids[i]);
    for (std::size_t j = 0; j < d; ++j) centroid[j] += p[j];
  }
  for (std::size_t j = 0; j < d; ++j) centroid[j] /= static_cast<double>(end - begin);
  int vantage = ids[begin];
  double far = -1.0;
  for (int i = begin; i < end; ++i) {
    double dc = distance(metric, point(ids[i]), centroid.data(), d);
    if (dc > far || (dc == far && ids[i] < vantage)) {
      far = dc;
      vantage = ids[i];
    }
  }

  std::vector<Candidate> rest;
  rest.reserve(end - begin - 1);
  for (int i = begin; i < end; ++i) {
    if (ids[i] == vantage) continue;
    rest.push_back({distance(metric, point(ids[i]), point(vantage), d), ids[i]});
  }
  double dmax = 0.0;
  for (const auto& c : rest) dmax = std::max(dmax, c.dist);
  if (dmax == 0.0) {
    // all points coincide with the vantage; unsplittable
    make_leaf();
    return node_id;
  }

  const std::size_t mid = (rest.size() - 1) / 2;
  std::nth_element(rest.begin(), rest.begin() + mid, rest.end());
  // (lexicographic Candidate order keeps the partition deterministic)
  std::vector<int> inner_ids, outer_ids;
  inner_ids.reserve(mid + 1);
  outer_ids.reserve(rest.size() - mid - 1);
  const Candidate pivot = rest[mid];
  double imin = kInf, imax = -kInf, omin = kInf, omax = -kInf;
  for (const auto& c : rest) {
    if (c < pivot || (c.dist == pivot.dist && c.id == pivot.id)) {
      inner_ids.push_back(c.id);
      imin = std::min(imin, c.dist);
      imax = std::max(imax, c.dist);
    } else {
      outer_ids.push_back(c.id);
      omin = std::min(omin, c.dist);
      omax = std::max(omax, c.dist);
    }
  }
  if (inner_ids.empty() || outer_ids.empty()) {
    make_leaf();
    return node_id;
  }

  vp_nodes[node_id].vantage = vantage;
  vp_nodes[node_id].inner_min = imin;
  vp_nodes[node_id].inner_max = imax;
  vp_nodes[node_id].outer_min = omin;
  vp_nodes[node_id].outer_max = omax;

  std::vector<int> scratch = std::move(inner_ids);
  int inner = build_vp_node(scratch, 0, static_cast<int>(scratch.size()));
  scratch = std::move(outer_ids);
  int outer = build_vp_node(scratch, 0, static_cast<int>(scratch.size()));
  vp_nodes[node_id].inner = inner;
  vp_nodes[node_id].outer = outer;
  return node_id;
}

// ---- query kernels -------------------------------------------------------

template <typename Ops>
void NeighborIndex::Impl::knn_brute(const double* q, int self, BestK& best) const {
  const double* p = pts.data();
  for (std::size_t i = 0; i < n; ++i, p += d) {
    if (static_cast<int>(i) == self) continue;
    double dist = Ops::dist_bounded(q, p, d, best.bound());
    best.offer(dist, static_cast<int>(i));
  }
}

template <typename Ops>
void NeighborIndex::Impl::knn_kd(int node, const double* q, int self, BestK& best) const {
  const KdNode& nd = kd_nodes[node];
  if (nd.left < 0) {
    const double* p = kd_pts.data() + static_cast<std::size_t>(nd.begin) * d;
    for (int i = nd.begin; i < nd.end; ++i, p += d) {
      const int id = kd_order[i];
      if (id == self) continue;
      best.offer(Ops::dist_bounded(q, p, d, best.bound()), id);
    }
    return;
  }
  const double lb_l = Ops::box_lb(q, kd_boxlo.data() + static_cast<std::size_t>(nd.left) * d,
                                  kd_boxhi.data() + static_cast<std::size_t>(nd.left) * d, d);
  const double lb_r = Ops::box_lb(q, kd_boxlo.data() + static_cast<std::size_t>(nd.right) * d,
                                  kd_boxhi.data() + static_cast<std::size_t>(nd.right) * d, d);
  const int first = lb_l <= lb_r ? nd.left : nd.right;
  const int second = lb_l <= lb_r ? nd.right : nd.left;
  const double lb_first = std::min(lb_l, lb_r);
  const double lb_second = std::max(lb_l, lb_r);
  if (lb_first <= best.bound()) knn_kd<Ops>(first, q, self, best);
  if (lb_second <= best.bound()) knn_kd<Ops>(second, q, self, best);
}

template <typename Ops>
void NeighborIndex::Impl::knn_vp(int node, const double* q, int self, BestK& best) const {
  const VpNode& nd = vp_nodes[node];
  if (nd.leaf_begin >= 0) {
    for (int i = nd.leaf_begin; i < nd.leaf_end; ++i) {
      const int id = vp_order[i];
      if (id == self) continue;
      best.offer(Ops::dist_bounded(q, point(id), d, best.bound()), id);
    }
    return;
  }
  const double dv = Ops::dist(q, point(nd.vantage), d);
  if (nd.vantage != self) best.offer(dv, nd.vantage);
  const double lb_inner = std::max({0.0, dv - nd.inner_max, nd.inner_min - dv});
  const double lb_outer = std::max({0.0, dv - nd.outer_max, nd.outer_min - dv});
  int first = nd.inner, second = nd.outer;
  double lb_first = lb_inner, lb_second = lb_outer;
  if (lb_outer < lb_inner) {
    first = nd.outer;
    second = nd.inner;
    std::swap(lb_first, lb_second);
  }
  if (lb_first <= best.bound()) knn_vp<Ops>(first, q, self, best);
  if (lb_second <= best.bound()) knn_vp<Ops>(second, q, self, best);
}

template <typename Ops>
int NeighborIndex::Impl::count_brute(const double* q, double radius, RangeBoundary b) const {
  int count = 0;
  const double* p = pts.data();
  for (std::size_t i = 0; i < n; ++i, p += d) {
    double dist = Ops::dist_bounded(q, p, d, radius);
    if (qualifies(dist, radius, b)) ++count;
  }
  return count;
}

template <typename Ops>
int NeighborIndex::Impl::count_kd(int node, const double* q, double radius, RangeBoundary b) const {
  const KdNode& nd = kd_nodes[node];
  const double* lo = kd_boxlo.data() + static_cast<std::size_t>(node) * d;
  const double* hi = kd_boxhi.data() + static_cast<std::size_t>(node) * d;
  const double lb = Ops::box_lb(q, lo, hi, d);
  if (!qualifies(lb, radius, b)) return 0;
  const double ub = Ops::box_ub(q, lo, hi, d);
  if (qualifies(ub, radius, b)) return nd.end - nd.begin;
  if (nd.left < 0) {
    int count = 0;
    const double* p = kd_pts.data() + static_cast<std::size_t>(nd.begin) * d;
    for (int i = nd.begin; i < nd.end; ++i, p += d) {
      if (qualifies(Ops::dist_bounded(q, p, d, radius), radius, b)) ++count;
    }
    return count;
  }
  return count_kd<Ops>(nd.left, q, radius, b) + count_kd<Ops>(nd.right, q, radius, b);
}

template <typename Ops>
int NeighborIndex::Impl::count_vp(int node, const double* q, double radius, RangeBoundary b) const {
  const VpNode& nd = vp_nodes[node];
  if (nd.leaf_begin >= 0) {
    int count = 0;
    for (int i = nd.leaf_begin; i < nd.leaf_end; ++i) {
      if (qualifies(Ops::dist_bounded(q, point(vp_order[i]), d, radius), radius, b)) ++count;
    }
    return count;
  }
  const double dv = Ops::dist(q, point(nd.vantage), d);
  int count = qualifies(dv, radius, b) ? 1 : 0;
  const VpNode& in = vp_nodes[nd.inner];
  const VpNode& out = vp_nodes[nd.outer];
  const double lb_inner = std::max({0.0, dv - nd.inner_max, nd.inner_min - dv});
  const double ub_inner = dv + nd.inner_max;
  if (qualifies(lb_inner, radius, b)) {
    count += qualifies(ub_inner, radius, b) ? in.size : count_vp<Ops>(nd.inner, q, radius, b);
  }
  const double lb_outer = std::max({0.0, dv - nd.outer_max, nd.outer_min - dv});
  const double ub_outer = dv + nd.outer_max;
  if (qualifies(lb_outer, radius, b)) {
    count += qualifies(ub_outer, radius, b) ? out.size : count_vp<Ops>(nd.outer, q, radius, b);
  }
  return count;
}

template <typename Ops>
BestK NeighborIndex::Impl::run_knn(int query, int k, bool exclude_self) const {
  BestK best(k);
  const double* q = point(query);
  const int self = exclude_self ? query : -1;
  switch (structure) {
    case IndexStructure::KdTree:
      knn_kd<Ops>(0, q, self, best);
      break;
    case IndexStructure::VpTree:
      knn_vp<Ops>(0, q, self, best);
      break;
    default:
      knn_brute<Ops>(q, self, best);
  }
  return best;
}

template <typename Ops>
int NeighborIndex::Impl::run_count(int query, double radius, RangeBoundary b) const {
  const double* q = point(query);
  switch (structure) {
    case IndexStructure::KdTree:
      return count_kd<Ops>(0, q, radius, b);
    case IndexStructure::VpTree:
      return count_vp<Ops>(0, q, radius, b);
    default:
      return count_brute<Ops>(q, radius, b);
  }
}

// ---- public API ----------------------------------------------------------

NeighborIndex NeighborIndex::build(const SampleSet& points, Metric metric,
                                   std::optional<IndexStructure> force) {
  if (points.size() < 2) {
    throw std::invalid_argument("NeighborIndex: need at least 2 points");
  }
  points.validate();

  auto impl = std::make_shared<Impl>();
  impl->n = points.size();
  impl->d = points.dim();
  impl->metric = metric;
  impl->pts = points.data();

  auto ensure_structure = [&](IndexStructure s) {
    impl->structure = s;
    if (s == IndexStructure::KdTree && impl->kd_nodes.empty()) impl->build_kd();
    if (s == IndexStructure::VpTree && impl->vp_nodes.empty()) impl->build_vp();
  };

  if (force.has_value()) {
    ensure_structure(*force);
  } else if (impl->d <= 8) {
    ensure_structure(IndexStructure::KdTree);
  } else if (impl->n <= 1024) {
    ensure_structure(IndexStructure::BruteForce);
  } else {
    // startup benchmark: a handful of kNN probes on the vp-tree vs the
    // linear scan; answers are structure-independent, only speed differs
    ensure_structure(IndexStructure::VpTree);
    const int probes = 24;
    const int k = std::min<int>(8, static_cast<int>(impl->n) - 1);
    auto time_probes = [&](auto runner) {
      auto t0 = std::chrono::steady_clock::now();
      for (int i = 0; i < probes; ++i) {
        int q = static_cast<int>((static_cast<std::size_t>(i) * impl->n) / probes);
        runner(q);
      }
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    auto run_for = [&](IndexStructure s, int q) {
      impl->structure = s;
      if (metric == Metric::MaxNorm) {
        impl->run_knn<ChebOps>(q, k, true);
      } else {
        impl->run_knn<EuclOps>(q, k, true);
      }
    };
    double t_vp = time_probes([&](int q) { run_for(IndexStructure::VpTree, q); });
    double t_brute = time_probes([&](int q) { run_for(IndexStructure::BruteForce, q); });
    impl->structure = t_vp <= t_brute ? IndexStructure::VpTree : IndexStructure::BruteForce;
  }

  NeighborIndex idx;
  idx.impl_ = std::move(impl);
  return idx;
}

std::size_t NeighborIndex::size() const { return impl_->n; }
std::size_t NeighborIndex::dim() const { return impl_->d; }
Metric NeighborIndex::metric() const { return impl_->metric; }
IndexStructure NeighborIndex::structure() const { return impl_->structure; }

NeighborResult NeighborIndex::kth_neighbor(int query, int k, bool exclude_self) const {
  const int n = static_cast<int>(impl_->n);
  if (query < 0 || query >= n) throw std::invalid_argument("kth_neighbor: query id out of range");
  const int k_max = exclude_self ? n - 1 : n;
  if (k < 1 || k > k_max) throw std::invalid_argument("kth_neighbor: k out of range");

  BestK best = impl_->metric == Metric::MaxNorm ? impl_->run_knn<ChebOps>(query, k, exclude_self)
                                                : impl_->run_knn<EuclOps>(query, k, exclude_self);
  auto sorted = best.take_sorted();
  NeighborResult out;
  out.query = query;
  out.kth_distance = sorted.back().dist;
  out.ids.reserve(sorted.size());
  for (const auto& c : sorted) out.ids.push_back(c.id);
  return out;
}

double NeighborIndex::kth_distance(int query, int k, bool exclude_self) const {
  return kth_neighbor(query, k, exclude_self).kth_distance;
}

int NeighborIndex::range_count(int query, double radius, RangeBoundary boundary,
                               bool exclude_self) const {
  const int n = static_cast<int>(impl_->n);
  if (query < 0 || query >= n) throw std::invalid_argument("range_count: query id out of range");
  if (!(radius >= 0.0)) throw std::domain_error("range_count: radius must be >= 0");

  int count = impl_->metric == Metric::MaxNorm
                  ? impl_->run_count<ChebOps>(query, radius, boundary)
                  : impl_->run_count<EuclOps>(query, radius, boundary);
  if (exclude_self && qualifies(0.0, radius, boundary)) --count;
  return count;
}

std::vector<int> NeighborIndex::knn_ids(int query, int k) const {
  return kth_neighbor(query, k, true).ids;
}

}  // namespace minfo
