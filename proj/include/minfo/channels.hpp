#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "minfo/random.hpp"
#include "minfo/sample_set.hpp"

namespace minfo {

inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kLightSpeed = 299792458.0;      // m/s

/// Fiber link physics shared by the optical channel generators.
struct LinkConfig {
  double span_km = 100.0;
  int spans = 12;
  double attenuation_db_km = 0.2;
  double dispersion_ps_nm_km = 0.0;
  double gamma_w_km = 1.27;            // Kerr coefficient, 1/(W km)
  double noise_figure_db = 6.0;
  double symbol_rate_baud = 50e9;
  double wavelength_nm = 1550.0;
  bool per_span_dispersion_compensation = false;  // ideal FBG after each span

  void validate() const;
  double alpha_np_per_km() const;     // power attenuation, 1/km
  double span_power_gain() const;     // amplifier gain restoring span loss
  /// ASE variance per complex symbol in the matched-filter bandwidth Rs,
  /// single polarization: (G - 1) h nu F Rs.
  double ase_variance_per_symbol() const;
  /// Effective nonlinear length of a lossy segment of dz km.
  double effective_length_km(double dz_km) const;
};

struct InputDistribution {
  enum class Kind { Cscg, HalfGaussian, Qam };
  Kind kind = Kind::Cscg;
  double power_w = 1e-3;
  int qam_order = 64;

  void validate() const;
  std::complex<double> sample(RandomStream& rng) const;
  std::vector<std::complex<double>> sample_n(std::size_t n, RandomStream& rng) const;
  /// Constellation scaled to the configured average power (Qam only).
  std::vector<std::complex<double>> constellation() const;
};

/// Matched (input, output) sample pairs plus the reference SNR of the
/// equivalent linear channel.
struct ChannelRun {
  SampleSet x;
  SampleSet y;
  double snr_reference = 0.0;  // linear power ratio
  double power_dbm = 0.0;
  int block_size = 1;  // output block width in symbols (dispersive runs)
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);
double db_to_linear(double db);

/// y = x + n at the given SNR (noise variance P/snr; snr may be infinite).
ChannelRun awgn_channel(const InputDistribution& input, double snr, std::size_t n,
                        RandomStream& rng);

/// 2x2 real rotation by alpha applied to a pair of complex symbols, plus
/// i.i.d. CSCG noise on each output.
ChannelRun mimo2x2_channel(const InputDistribution& input, double snr, double alpha,
                           std::size_t n, RandomStream& rng);

/// Memoryless per-symbol span recursion: Kerr phase rotation, loss, ideal
/// amplifier with ASE. Exact solution of the zero-dispersion propagation.
ChannelRun zero_dispersion_link(const InputDistribution& input, const LinkConfig& link,
                                std::size_t n, RandomStream& rng);

/// Linear dispersive waveform channel: RRC shaping, per-span chromatic
/// dispersion and ASE, matched filter, symbol sampling. One run per
/// requested output block size (odd widths, centered, edges trimmed).
std::vector<ChannelRun> dispersive_link(const InputDistribution& input, const LinkConfig& link,
                                        std::size_t n, const std::vector<int>& block_sizes,
                                        double rolloff, int oversampling, RandomStream& rng);

/// Full nonlinear chain: RRC shaping, per-span SSFM + FBG + EDFA, receiver
/// digital backpropagation, matched filter, symbol sampling.
ChannelRun realistic_link(const InputDistribution& input, const LinkConfig& link, std::size_t n,
                          double rolloff, int oversampling, double step_km, RandomStream& rng);

}  // namespace minfo
