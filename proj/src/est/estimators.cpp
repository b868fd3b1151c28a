#include "minfo/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "minfo/neighbor_index.hpp"
#include "minfo/parallel.hpp"

namespace minfo {

namespace {

constexpr double kLn2 = std::numbers::ln2;

/// Assembles an EstimateResult from per-sample natural-log contributions.
/// `used[i] == 0` marks samples dropped by the zero-distance rule; the mean
/// runs over the remaining ones in index order (Kahan), so parallel and
/// serial fills agree bit for bit.
EstimateResult finalize(EstimatorMethod method, double const_nats,
                        const std::vector<double>& contrib_nats, const std::vector<char>& used,
                        std::map<std::string, double> diagnostics) {
  std::vector<double> kept_bits;
  kept_bits.reserve(contrib_nats.size());
  for (std::size_t i = 0; i < contrib_nats.size(); ++i) {
    if (used[i]) kept_bits.push_back(contrib_nats[i] / kLn2);
  }
  if (kept_bits.empty()) {
    throw std::runtime_error("degenerate sample set: every sample was dropped");
  }
  EstimateResult r;
  r.method = method;
  r.n_used = kept_bits.size();
  r.value_bits = const_nats / kLn2 + kahan_total(kept_bits) / static_cast<double>(kept_bits.size());
  r.stderr_bits = block_jackknife_stderr(kept_bits);
  r.diagnostics = std::move(diagnostics);
  return r;
}

std::vector<double> kth_distances(const NeighborIndex& index, int k, int threads) {
  std::vector<double> out(index.size());
  parallel_chunks(index.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = index.kth_distance(static_cast<int>(i), k, true);
    }
  });
  return out;
}

void check_pair(const SampleSet& x, const SampleSet& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("estimator: X and Y must have the same sample count");
  }
}

void check_k(int k, std::size_t n) {
  if (k < 1 || static_cast<std::size_t>(k) > n - 1) {
    throw std::invalid_argument("estimator: k must be in [1, N-1]");
  }
}

}  // namespace

std::string estimator_method_name(EstimatorMethod m) {
  switch (m) {
    case EstimatorMethod::Kozachenko3H: return "kozachenko-3h";
    case EstimatorMethod::Kraskov: return "kraskov";
    case EstimatorMethod::LocalGaussian: return "local-gaussian";
    case EstimatorMethod::Glb: return "glb";
  }
  return "unknown";
}

EstimatorMethod estimator_method_from_name(const std::string& name) {
  if (name == "kozachenko-3h" || name == "kozachenko") return EstimatorMethod::Kozachenko3H;
  if (name == "kraskov") return EstimatorMethod::Kraskov;
  if (name == "local-gaussian") return EstimatorMethod::LocalGaussian;
  if (name == "glb") return EstimatorMethod::Glb;
  throw std::invalid_argument("unknown estimator method: " + name);
}

int EstimatorConfig::resolved_p(std::size_t n) const {
  if (p > 0) return p;
  return static_cast<int>(0.04 * static_cast<double>(n));
}

EstimateResult kl_entropy(const SampleSet& x, int k, Metric metric, EpsConvention conv,
                          int threads) {
  const std::size_t n = x.size();
  const double d = static_cast<double>(x.dim());
  check_k(k, n);

  const NeighborIndex index = NeighborIndex::build(x, metric);
  const std::vector<double> dist = kth_distances(index, k, threads);

  const BallConvention ball =
      conv == EpsConvention::NeighborBox ? BallConvention::Diameter : BallConvention::Radius;
  const double eps_scale = conv == EpsConvention::NeighborBox ? 2.0 : 1.0;
  const double const_nats =
      -digamma(k) + digamma(static_cast<double>(n)) + ln_unit_ball_volume(x.dim(), metric, ball);

  std::vector<double> contrib(n, 0.0);
  std::vector<char> used(n, 1);
  double dropped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i] <= 0.0) {
      used[i] = 0;
      ++dropped;
    } else {
      contrib[i] = d * std::log(eps_scale * dist[i]);
    }
  }
  std::map<std::string, double> diag{{"zero_distance_dropped", dropped}};
  return finalize(EstimatorMethod::Kozachenko3H, const_nats, contrib, used, std::move(diag));
}

EstimateResult mi_3h(const SampleSet& x, const SampleSet& y, int k, Metric metric, int threads) {
  check_pair(x, y);
  const std::size_t n = x.size();
  check_k(k, n);
  const SampleSet joint = SampleSet::hcat(x, y);

  const std::vector<double> dx = kth_distances(NeighborIndex::build(x, metric), k, threads);
  const std::vector<double> dy = kth_distances(NeighborIndex::build(y, metric), k, threads);
  const std::vector<double> dj = kth_distances(NeighborIndex::build(joint, metric), k, threads);

  // per-entropy constants; the ball-volume terms cancel only for max-norm
  const double const_nats =
      -digamma(k) + digamma(static_cast<double>(n)) +
      ln_unit_ball_volume(x.dim(), metric, BallConvention::Diameter) +
      ln_unit_ball_volume(y.dim(), metric, BallConvention::Diameter) -
      ln_unit_ball_volume(joint.dim(), metric, BallConvention::Diameter);

  const double ddx = static_cast<double>(x.dim());
  const double ddy = static_cast<double>(y.dim());
  const double ddj = static_cast<double>(joint.dim());

  std::vector<double> contrib(n, 0.0);
  std::vector<char> used(n, 1);
  double dropped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dx[i] <= 0.0 || dy[i] <= 0.0 || dj[i] <= 0.0) {
      used[i] = 0;
      ++dropped;
    } else {
      contrib[i] = ddx * std::log(2.0 * dx[i]) + ddy * std::log(2.0 * dy[i]) -
                   ddj * std::log(2.0 * dj[i]);
    }
  }
  std::map<std::string, double> diag{{"zero_distance_dropped", dropped}};
  return finalize(EstimatorMethod::Kozachenko3H, const_nats, contrib, used, std::move(diag));
}

EstimateResult mi_kraskov(const SampleSet& x, const SampleSet& y, int k, int threads) {
  check_pair(x, y);
  const std::size_t n = x.size();
  check_k(k, n);
  const SampleSet joint = SampleSet::hcat(x, y);

  const NeighborIndex joint_index = NeighborIndex::build(joint, Metric::MaxNorm);
  const NeighborIndex x_index = NeighborIndex::build(x, Metric::MaxNorm);
  const NeighborIndex y_index = NeighborIndex::build(y, Metric::MaxNorm);

  std::vector<double> contrib(n, 0.0);
  std::vector<char> used(n, 1);
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const int q = static_cast<int>(i);
      const double r = joint_index.kth_distance(q, k, true);
      if (r <= 0.0) {
        used[i] = 0;
        continue;
      }
      const int nx = x_index.range_count(q, r, RangeBoundary::Strict, true);
      const int ny = y_index.range_count(q, r, RangeBoundary::Strict, true);
      contrib[i] = -digamma(nx + 1.0) - digamma(ny + 1.0);
    }
  });

  double dropped = 0;
  for (char u : used) {
    if (!u) ++dropped;
  }
  const double const_nats = digamma(k) + digamma(static_cast<double>(n));
  std::map<std::string, double> diag{{"zero_distance_dropped", dropped}};
  return finalize(EstimatorMethod::Kraskov, const_nats, contrib, used, std::move(diag));
}

EstimateResult mi_kl_discrete(const SampleSet& x, const SampleSet& y, int k, Metric metric,
                              int threads) {
  check_pair(x, y);
  const std::size_t n = x.size();
  check_k(k, n);
  const double d = static_cast<double>(y.dim());

  // group samples by exact input row
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](std::size_t a, std::size_t b) {
    const double* ra = x.row(a);
    const double* rb = x.row(b);
    for (std::size_t j = 0; j < x.dim(); ++j) {
      if (ra[j] != rb[j]) return ra[j] < rb[j];
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), row_less);
  auto row_equal = [&](std::size_t a, std::size_t b) {
    const double* ra = x.row(a);
    const double* rb = x.row(b);
    for (std::size_t j = 0; j < x.dim(); ++j) {
      if (ra[j] != rb[j]) return false;
    }
    return true;
  };
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && row_equal(order[i], order[j])) ++j;
    groups.emplace_back(order.begin() + i, order.begin() + j);
    i = j;
  }

  const std::vector<double> dist_y =
      kth_distances(NeighborIndex::build(y, metric), k, threads);

  std::vector<double> dist_cond(n, 0.0);
  std::vector<double> psi_group(n, 0.0);
  for (const auto& group : groups) {
    if (group.size() < static_cast<std::size_t>(k) + 1) {
      throw std::invalid_argument(
          "mi_kl_discrete: a constellation point has fewer than k+1 samples; "
          "increase N or reduce k");
    }
    const SampleSet cloud = y.select_rows(group);
    const NeighborIndex cloud_index = NeighborIndex::build(cloud, metric);
    const std::vector<double> dc = kth_distances(cloud_index, k, threads);
    const double psi_ns = digamma(static_cast<double>(group.size()));
    for (std::size_t m = 0; m < group.size(); ++m) {
      dist_cond[group[m]] = dc[m];
      psi_group[group[m]] = psi_ns;
    }
  }

  // per-sample: [psi(N) - psi(n_s)] + d (ln eps_Y - ln eps_{Y|s});
  // psi(k) and the ball-volume terms cancel between the two entropies
  const double psi_n = digamma(static_cast<double>(n));
  std::vector<double> contrib(n, 0.0);
  std::vector<char> used(n, 1);
  double dropped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist_y[i] <= 0.0 || dist_cond[i] <= 0.0) {
      used[i] = 0;
      ++dropped;
    } else {
      contrib[i] = (psi_n - psi_group[i]) + d * (std::log(dist_y[i]) - std::log(dist_cond[i]));
    }
  }
  std::map<std::string, double> diag{{"zero_distance_dropped", dropped},
                                     {"constellation_points", static_cast<double>(groups.size())}};
  return finalize(EstimatorMethod::Kozachenko3H, 0.0, contrib, used, std::move(diag));
}

// ---- Gaussian auxiliary-channel lower bound --------------------------------

GaussianAuxChannel fit_gaussian_aux(const SampleSet& x, const SampleSet& y) {
  check_pair(x, y);
  if (x.dim() != 2 || y.dim() != 2) {
    throw std::invalid_argument("fit_gaussian_aux: expects scalar complex channels (2 real dims)");
  }
  if (x.size() < 2) throw std::invalid_argument("fit_gaussian_aux: need at least 2 samples");

  const std::size_t n = x.size();
  std::complex<double> num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> xi = x.complex_at(i);
    const std::complex<double> yi = y.complex_at(i);
    num += yi * std::conj(xi);
    den += std::norm(xi);
  }
  if (den == 0.0) throw std::invalid_argument("fit_gaussian_aux: all-zero input");

  GaussianAuxChannel aux;
  aux.gain = num / den;
  KahanSum resid;
  KahanSum power;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> xi = x.complex_at(i);
    const std::complex<double> yi = y.complex_at(i);
    resid.add(std::norm(yi - aux.gain * xi));
    power.add(std::norm(xi));
  }
  aux.noise_variance = resid.value() / static_cast<double>(n);
  aux.input_power = power.value() / static_cast<double>(n);
  aux.input_model = GaussianAuxChannel::InputModel::Gaussian;
  aux.degenerate = aux.noise_variance == 0.0;
  return aux;
}

EstimateResult glb(const SampleSet& x, const SampleSet& y, const GaussianAuxChannel& aux,
                   int threads) {
  check_pair(x, y);
  if (x.dim() != 2 || y.dim() != 2) {
    throw std::invalid_argument("glb: expects scalar complex channels (2 real dims)");
  }
  if (!(aux.noise_variance > 0.0)) {
    throw std::domain_error("glb: auxiliary noise variance must be positive");
  }
  if (aux.input_model == GaussianAuxChannel::InputModel::Discrete) {
    if (aux.constellation.empty() || aux.constellation.size() != aux.priors.size()) {
      throw std::invalid_argument("glb: discrete input model needs constellation and priors");
    }
    double prior_sum = 0.0;
    for (double p : aux.priors) prior_sum += p;
    if (std::fabs(prior_sum - 1.0) > 1e-9) {
      throw std::invalid_argument("glb: priors must sum to 1");
    }
  }

  const std::size_t n = x.size();
  const double sigma2 = aux.noise_variance;
  const double ln_pi_sigma2 = std::log(std::numbers::pi * sigma2);

  std::vector<double> contrib(n, 0.0);
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> lse;
    lse.reserve(aux.constellation.size());
    for (std::size_t i = begin; i < end; ++i) {
      const std::complex<double> xi = x.complex_at(i);
      const std::complex<double> yi = y.complex_at(i);
      const double ln_cond = -ln_pi_sigma2 - std::norm(yi - aux.gain * xi) / sigma2;

      double ln_out;
      if (aux.input_model == GaussianAuxChannel::InputModel::Gaussian) {
        const double v = std::norm(aux.gain) * aux.input_power + sigma2;
        ln_out = -std::log(std::numbers::pi * v) - std::norm(yi) / v;
      } else {
        lse.clear();
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < aux.constellation.size(); ++s) {
          const double term = std::log(aux.priors[s]) - ln_pi_sigma2 -
                              std::norm(yi - aux.gain * aux.constellation[s]) / sigma2;
          lse.push_back(term);
          m = std::max(m, term);
        }
        double acc = 0.0;
        for (double t : lse) acc += std::exp(t - m);
        ln_out = m + std::log(acc);
      }
      contrib[i] = ln_cond - ln_out;
    }
  });

  std::vector<char> used(n, 1);
  return finalize(EstimatorMethod::Glb, 0.0, contrib, used, {});
}

}  // namespace minfo
