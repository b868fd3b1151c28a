#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "minfo/metric.hpp"
#include "minfo/sample_set.hpp"
#include "minfo/special.hpp"

namespace minfo {

enum class EstimatorMethod { Kozachenko3H, Kraskov, LocalGaussian, Glb };

std::string estimator_method_name(EstimatorMethod m);
EstimatorMethod estimator_method_from_name(const std::string& name);

struct EstimatorConfig {
  EstimatorMethod method = EstimatorMethod::Kozachenko3H;
  int k = 4;
  /// Local Gaussian neighborhood size; 0 means floor(0.04 * N).
  int p = 0;
  Metric metric = Metric::MaxNorm;
  /// Local Gaussian box-integral budget (low-discrepancy points).
  int integration_samples = 1024;
  /// Ridge added to neighborhood covariances; 0 means 1e-9 * trace / d.
  double covariance_ridge = 0.0;

  int resolved_p(std::size_t n) const;
};

struct EstimateResult {
  double value_bits = 0.0;
  /// Delete-one-block jackknife standard error (10 blocks) of the
  /// per-sample contribution mean.
  double stderr_bits = 0.0;
  EstimatorMethod method = EstimatorMethod::Kozachenko3H;
  std::size_t n_used = 0;
  std::map<std::string, double> diagnostics;
};

/// Convention for the neighbor statistic entering the entropy formula.
/// The two choices are algebraically identical once paired with the
/// matching unit-ball convention; NeighborBox (epsilon = twice the
/// distance, diameter-convention ball) is the internal default because the
/// max-norm ball volume is then exactly 1.
enum class EpsConvention { KthDistance, NeighborBox };

/// Kozachenko-Leonenko k-th neighbor entropy, in bits.
EstimateResult kl_entropy(const SampleSet& x, int k, Metric metric = Metric::MaxNorm,
                          EpsConvention conv = EpsConvention::NeighborBox, int threads = 1);

/// 3H mutual information H(X) + H(Y) - H(X, Y), same k throughout.
EstimateResult mi_3h(const SampleSet& x, const SampleSet& y, int k,
                     Metric metric = Metric::MaxNorm, int threads = 1);

/// Count-based Kraskov mutual information (max-norm only):
///   psi(k) + psi(N) - mean_i[psi(nx_i + 1) + psi(ny_i + 1)]
/// with nx/ny strict marginal counts inside the joint k-th neighbor box.
EstimateResult mi_kraskov(const SampleSet& x, const SampleSet& y, int k, int threads = 1);

/// Local Gaussian entropy: neighborhoods of p points provide a local mean
/// and covariance; the sample's box integral is evaluated by deterministic
/// low-discrepancy quadrature.
EstimateResult local_gaussian_entropy(const SampleSet& x, const EstimatorConfig& cfg,
                                      int threads = 1);

/// 3H mutual information with local Gaussian entropies.
EstimateResult mi_local_gaussian(const SampleSet& x, const SampleSet& y,
                                 const EstimatorConfig& cfg, int threads = 1);

/// Mutual information for a discrete (constellation) input:
/// I = H(Y) - sum_s p(s) H(Y | X = s), each term a k-th neighbor entropy on
/// the corresponding output cloud. Differential entropy of the discrete
/// input itself is undefined, so the 3H route does not apply.
EstimateResult mi_kl_discrete(const SampleSet& x, const SampleSet& y, int k,
                              Metric metric = Metric::MaxNorm, int threads = 1);

// ---- Gaussian auxiliary-channel lower bound --------------------------------

struct GaussianAuxChannel {
  enum class InputModel { Gaussian, Discrete };

  std::complex<double> gain{1.0, 0.0};
  double noise_variance = 0.0;  // total complex variance
  InputModel input_model = InputModel::Gaussian;
  double input_power = 0.0;                           // Gaussian(P)
  std::vector<std::complex<double>> constellation;    // Discrete
  std::vector<double> priors;                         // Discrete, sums to 1
  bool degenerate = false;                            // fitted noise_variance == 0
};

/// Least-squares fit of a scalar complex gain and residual noise variance;
/// the input model defaults to Gaussian with the empirical input power.
GaussianAuxChannel fit_gaussian_aux(const SampleSet& x, const SampleSet& y);

/// Average of log2 q(y|x)/q(y) under the fitted auxiliary channel: a lower
/// bound on I(X;Y) regardless of the true channel.
EstimateResult glb(const SampleSet& x, const SampleSet& y, const GaussianAuxChannel& aux,
                   int threads = 1);

/// Deterministic low-discrepancy points on [0,1)^d (Kronecker sequence with
/// the generalized golden-ratio generator), row-major m x d.
std::vector<double> kronecker_lattice(std::size_t m, std::size_t d);

}  // namespace minfo
