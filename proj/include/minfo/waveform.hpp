#pragma once

#include <complex>
#include <vector>

#include "minfo/channels.hpp"
#include "minfo/random.hpp"

namespace minfo {

/// Oversampled complex field envelope, amplitude in sqrt(W). The sample
/// count is kept a power of two; the symbol content may be padded to fit.
struct Waveform {
  std::vector<std::complex<double>> samples;
  double sample_rate_hz = 0.0;
  int oversampling = 1;

  std::size_t size() const { return samples.size(); }
  double mean_power_w() const;
};

enum class SpectralDirection { Forward, Inverse };
enum class PropagationDirection { Forward, Backward };

/// Root-raised-cosine shaping of a symbol sequence (frequency domain,
/// circular). The symbol count times the oversampling factor must be a
/// power of two; the waveform mean power equals the symbol mean power.
Waveform shape_pulse(const std::vector<std::complex<double>>& symbols, double symbol_rate_baud,
                     double rolloff, int oversampling);

/// Matched RRC filter + symbol-time sampling; back-to-back with shape_pulse
/// this is exactly Nyquist (unit gain, zero ISI).
std::vector<std::complex<double>> matched_filter_sample(const Waveform& w,
                                                        double symbol_rate_baud, double rolloff,
                                                        std::size_t n_symbols);

/// All-pass chromatic dispersion over length_km: spectrum multiplied by
/// exp(+j (beta2/2) w^2 L); Inverse applies the conjugate.
void chromatic_dispersion(Waveform& w, double length_km, double dispersion_ps_nm_km,
                          double wavelength_nm, SpectralDirection direction);

/// Group-velocity dispersion parameter beta2 in ps^2/km.
double beta2_ps2_km(double dispersion_ps_nm_km, double wavelength_nm);

/// Adds white complex Gaussian noise with the given per-sample variance.
void add_white_noise(Waveform& w, double variance_per_sample, RandomStream& rng);

/// Symmetric split-step propagation over the whole link (all spans).
/// Forward optionally injects per-span amplifier noise and applies the FBG
/// when configured; Backward inverts gain, dispersion and nonlinearity with
/// no noise (digital backpropagation). Throws if step_km exceeds the span.
Waveform ssfm_propagate(const Waveform& w, const LinkConfig& link,
                        PropagationDirection direction, bool noise, double step_km,
                        RandomStream& rng);

}  // namespace minfo
