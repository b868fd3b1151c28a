#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "minfo/estimators.hpp"
#include "minfo/neighbor_index.hpp"
#include "minfo/parallel.hpp"

namespace minfo {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kConditionLimit = 1e12;

/// Generalized golden ratio: the positive root of x^(d+1) = x + 1.
double harmonious_number(std::size_t d) {
  double x = 1.5;
  for (int it = 0; it < 128; ++it) {
    const double xp = std::pow(x, static_cast<double>(d));
    const double f = xp * x - x - 1.0;
    const double df = (static_cast<double>(d) + 1.0) * xp - 1.0;
    const double step = f / df;
    x -= step;
    if (std::fabs(step) < 1e-16) break;
  }
  return x;
}

struct EntropyTerms {
  std::vector<double> contrib_nats;  // -ln g + ln G per sample
  std::vector<char> used;
  double zero_distance = 0;
  double diagonal_fallback = 0;
  double degenerate_covariance = 0;
};

EntropyTerms local_gaussian_terms(const SampleSet& x, int k, int p, int m_quad, double ridge,
                                  int threads) {
  const std::size_t n = x.size();
  const int d = static_cast<int>(x.dim());
  if (p < d + 1 || static_cast<std::size_t>(p) > n - 1) {
    throw std::invalid_argument("local_gaussian: p must satisfy d+1 <= p <= N-1");
  }
  if (k < 1 || static_cast<std::size_t>(k) > n - 1) {
    throw std::invalid_argument("local_gaussian: k must be in [1, N-1]");
  }
  if (m_quad < 1) throw std::invalid_argument("local_gaussian: integration budget must be >= 1");

  const NeighborIndex index = NeighborIndex::build(x, Metric::MaxNorm);
  const std::vector<double> lattice = kronecker_lattice(static_cast<std::size_t>(m_quad), x.dim());

  EntropyTerms out;
  out.contrib_nats.assign(n, 0.0);
  out.used.assign(n, 1);
  std::vector<char> fallback_flag(n, 0);
  std::vector<char> degenerate_flag(n, 0);

  const int n_query = std::max(k, p);
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    Eigen::MatrixXd neigh(p, d);
    Eigen::MatrixXd quad(d, m_quad);
    Eigen::VectorXd mu(d), delta(d);
    Eigen::MatrixXd cov(d, d);

    for (std::size_t i = begin; i < end; ++i) {
      const NeighborResult nb = index.kth_neighbor(static_cast<int>(i), n_query, true);
      const double kth = chebyshev_distance(x.row(i), x.row(nb.ids[k - 1]), x.dim());
      if (kth <= 0.0) {
        out.used[i] = 0;
        continue;
      }
      const double eps = 2.0 * kth;

      for (int r = 0; r < p; ++r) {
        const double* src = x.row(nb.ids[r]);
        for (int c = 0; c < d; ++c) neigh(r, c) = src[c];
      }
      mu = neigh.colwise().mean();
      neigh.rowwise() -= mu.transpose();
      cov.noalias() = neigh.transpose() * neigh / static_cast<double>(p);

      const double trace = cov.trace();
      if (!(trace > 0.0)) {
        out.used[i] = 0;
        degenerate_flag[i] = 1;
        continue;
      }
      const double delta_ridge = ridge > 0.0 ? ridge : 1e-9 * trace / d;
      cov.diagonal().array() += delta_ridge;

      Eigen::LLT<Eigen::MatrixXd> llt(cov);
      bool diagonal = llt.info() != Eigen::Success;
      if (!diagonal) {
        const auto& l_diag = llt.matrixLLT().diagonal();
        const double dmax = l_diag.maxCoeff();
        const double dmin = l_diag.minCoeff();
        if (!(dmin > 0.0) || (dmax / dmin) * (dmax / dmin) > kConditionLimit) diagonal = true;
      }

      Eigen::VectorXd diag_var;
      if (diagonal) {
        fallback_flag[i] = 1;
        diag_var = cov.diagonal().cwiseMax(delta_ridge);
      }

      auto quadratic_form = [&](const Eigen::VectorXd& v) {
        if (diagonal) return (v.array().square() / diag_var.array()).sum();
        return llt.matrixL().solve(v).squaredNorm();
      };

      delta = Eigen::Map<const Eigen::VectorXd>(x.row(i), d) - mu;
      const double ln_g_self = -0.5 * quadratic_form(delta);

      // ln G = d ln eps + ln mean_m g(u_m), box corners at x_i +- eps/2
      for (int q = 0; q < m_quad; ++q) {
        for (int c = 0; c < d; ++c) {
          quad(c, q) =
              x.row(i)[c] + eps * (lattice[static_cast<std::size_t>(q) * d + c] - 0.5) - mu(c);
        }
      }
      double lse_max = -std::numeric_limits<double>::infinity();
      Eigen::VectorXd exponents(m_quad);
      if (diagonal) {
        for (int q = 0; q < m_quad; ++q) {
          exponents(q) = -0.5 * (quad.col(q).array().square() / diag_var.array()).sum();
          lse_max = std::max(lse_max, exponents(q));
        }
      } else {
        Eigen::MatrixXd solved = llt.matrixL().solve(quad);
        for (int q = 0; q < m_quad; ++q) {
          exponents(q) = -0.5 * solved.col(q).squaredNorm();
          lse_max = std::max(lse_max, exponents(q));
        }
      }
      double acc = 0.0;
      for (int q = 0; q < m_quad; ++q) acc += std::exp(exponents(q) - lse_max);
      const double ln_mean_g = lse_max + std::log(acc / static_cast<double>(m_quad));
      const double ln_big_g = d * std::log(eps) + ln_mean_g;

      out.contrib_nats[i] = -ln_g_self + ln_big_g;
    }
  });

  for (std::size_t i = 0; i < n; ++i) {
    if (!out.used[i] && !degenerate_flag[i]) ++out.zero_distance;
    if (degenerate_flag[i]) ++out.degenerate_covariance;
    if (fallback_flag[i]) ++out.diagonal_fallback;
  }
  return out;
}

EstimateResult assemble(double const_nats, const EntropyTerms& t) {
  std::vector<double> kept_bits;
  kept_bits.reserve(t.contrib_nats.size());
  for (std::size_t i = 0; i < t.contrib_nats.size(); ++i) {
    if (t.used[i]) kept_bits.push_back(t.contrib_nats[i] / kLn2);
  }
  if (kept_bits.empty()) {
    throw std::runtime_error("degenerate sample set: every sample was dropped");
  }
  EstimateResult r;
  r.method = EstimatorMethod::LocalGaussian;
  r.n_used = kept_bits.size();
  r.value_bits = const_nats / kLn2 + kahan_total(kept_bits) / static_cast<double>(kept_bits.size());
  r.stderr_bits = block_jackknife_stderr(kept_bits);
  r.diagnostics["zero_distance_dropped"] = t.zero_distance;
  r.diagnostics["diagonal_fallback"] = t.diagonal_fallback;
  r.diagnostics["degenerate_covariance"] = t.degenerate_covariance;
  return r;
}

}  // namespace

std::vector<double> kronecker_lattice(std::size_t m, std::size_t d) {
  const double phi = harmonious_number(d);
  std::vector<double> alpha(d);
  double inv = 1.0 / phi;
  for (std::size_t j = 0; j < d; ++j) {
    alpha[j] = inv;
    inv /= phi;
  }
  std::vector<double> out(m * d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.5 + static_cast<double>(i + 1) * alpha[j];
      out[i * d + j] = v - std::floor(v);
    }
  }
  return out;
}

EstimateResult local_gaussian_entropy(const SampleSet& x, const EstimatorConfig& cfg,
                                      int threads) {
  const std::size_t n = x.size();
  const int p = cfg.resolved_p(n);
  EntropyTerms t = local_gaussian_terms(x, cfg.k, p, cfg.integration_samples,
                                        cfg.covariance_ridge, threads);
  const double const_nats = digamma(static_cast<double>(n)) - digamma(cfg.k);
  return assemble(const_nats, t);
}

EstimateResult mi_local_gaussian(const SampleSet& x, const SampleSet& y,
                                 const EstimatorConfig& cfg, int threads) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("mi_local_gaussian: X and Y must have the same sample count");
  }
  const std::size_t n = x.size();
  const SampleSet joint = SampleSet::hcat(x, y);
  const int p = cfg.resolved_p(n);

  const EntropyTerms tx = local_gaussian_terms(x, cfg.k, p, cfg.integration_samples,
                                               cfg.covariance_ridge, threads);
  const EntropyTerms ty = local_gaussian_terms(y, cfg.k, p, cfg.integration_samples,
                                               cfg.covariance_ridge, threads);
  const EntropyTerms tj = local_gaussian_terms(joint, cfg.k, p, cfg.integration_samples,
                                               cfg.covariance_ridge, threads);

  // unified drop set keeps the three sums aligned sample by sample
  EntropyTerms combined;
  combined.contrib_nats.assign(n, 0.0);
  combined.used.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!tx.used[i] || !ty.used[i] || !tj.used[i]) {
      combined.used[i] = 0;
      continue;
    }
    combined.contrib_nats[i] = tx.contrib_nats[i] + ty.contrib_nats[i] - tj.contrib_nats[i];
  }
  combined.zero_distance = tx.zero_distance + ty.zero_distance + tj.zero_distance;
  combined.diagonal_fallback = tx.diagonal_fallback + ty.diagonal_fallback + tj.diagonal_fallback;
  combined.degenerate_covariance =
      tx.degenerate_covariance + ty.degenerate_covariance + tj.degenerate_covariance;

  // H(X) + H(Y) - H(XY): one psi(N) - psi(k) survives
  const double const_nats = digamma(static_cast<double>(n)) - digamma(cfg.k);
  return assemble(const_nats, combined);
}

}  // namespace minfo
