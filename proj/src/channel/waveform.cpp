#include "minfo/waveform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "minfo/fft.hpp"

namespace minfo {
namespace {

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

/// RRC amplitude response at frequency f in units of the symbol rate,
/// peak-normalized to 1. H^2 is the raised cosine, so the symbol-spaced
/// cascade of two of these is exactly Nyquist.
double rrc_response(double f, double rolloff) {
  const double af = std::fabs(f);
  const double lo = 0.5 * (1.0 - rolloff);
  const double hi = 0.5 * (1.0 + rolloff);
  if (af <= lo) return 1.0;
  if (af >= hi || rolloff <= 0.0) return 0.0;
  const double rc = 0.5 * (1.0 + std::cos(std::numbers::pi / rolloff * (af - lo)));
  return std::sqrt(rc);
}

/// Signed baseband frequency of DFT bin m, as a fraction of the sample rate.
double bin_fraction(std::size_t m, std::size_t len) {
  const auto half = len / 2;
  const double idx = m < half ? static_cast<double>(m)
                              : static_cast<double>(m) - static_cast<double>(len);
  return idx / static_cast<double>(len);
}

void apply_rrc(std::vector<std::complex<double>>& spectrum, int oversampling, double rolloff,
               double gain) {
  const std::size_t len = spectrum.size();
  for (std::size_t m = 0; m < len; ++m) {
    const double f_sym = bin_fraction(m, len) * oversampling;  // units of Rs
    spectrum[m] *= gain * rrc_response(f_sym, rolloff);
  }
}

}  // namespace

double Waveform::mean_power_w() const {
  double acc = 0.0;
  for (const auto& z : samples) acc += std::norm(z);
  return acc / static_cast<double>(samples.size());
}

Waveform shape_pulse(const std::vector<std::complex<double>>& symbols, double symbol_rate_baud,
                     double rolloff, int oversampling) {
  if (symbols.empty()) throw std::invalid_argument("shape_pulse: empty symbol sequence");
  if (oversampling < 4) throw std::invalid_argument("shape_pulse: oversampling must be >= 4");
  if (rolloff < 0.0 || rolloff > 1.0) throw std::invalid_argument("shape_pulse: rolloff in [0,1]");
  const std::size_t len = symbols.size() * static_cast<std::size_t>(oversampling);
  if (!is_pow2(len)) {
    throw std::invalid_argument("shape_pulse: symbol count * oversampling must be a power of two");
  }

  Waveform w;
  w.oversampling = oversampling;
  w.sample_rate_hz = symbol_rate_baud * oversampling;
  w.samples.assign(len, {0.0, 0.0});
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    w.samples[k * oversampling] = symbols[k];
  }
  fft_inplace(w.samples, false);
  // transmit gain `oversampling` makes the waveform mean power equal the
  // symbol mean power and the shape+matched cascade unit gain
  apply_rrc(w.samples, oversampling, rolloff, static_cast<double>(oversampling));
  fft_inplace(w.samples, true);
  return w;
}

std::vector<std::complex<double>> matched_filter_sample(const Waveform& w,
                                                        double symbol_rate_baud, double rolloff,
                                                        std::size_t n_symbols) {
  (void)symbol_rate_baud;
  const std::size_t os = static_cast<std::size_t>(w.oversampling);
  if (n_symbols * os > w.size()) {
    throw std::invalid_argument("matched_filter_sample: more symbols requested than available");
  }
  std::vector<std::complex<double>> spec = w.samples;
  fft_inplace(spec, false);
  apply_rrc(spec, w.oversampling, rolloff, 1.0);
  fft_inplace(spec, true);
  std::vector<std::complex<double>> out(n_symbols);
  for (std::size_t k = 0; k < n_symbols; ++k) out[k] = spec[k * os];
  return out;
}

double beta2_ps2_km(double dispersion_ps_nm_km, double wavelength_nm) {
  const double d_si = dispersion_ps_nm_km * 1e-6;       // s/m^2
  const double lambda_m = wavelength_nm * 1e-9;
  const double b2_si = -d_si * lambda_m * lambda_m / (2.0 * std::numbers::pi * kLightSpeed);
  return b2_si * 1e27;  // s^2/m -> ps^2/km
}

void chromatic_dispersion(Waveform& w, double length_km, double dispersion_ps_nm_km,
                          double wavelength_nm, SpectralDirection direction) {
  if (length_km == 0.0 || dispersion_ps_nm_km == 0.0) return;
  const double b2_si = beta2_ps2_km(dispersion_ps_nm_km, wavelength_nm) * 1e-27;  // s^2/m
  const double length_m = length_km * 1e3;
  const double sign = direction == SpectralDirection::Forward ? 1.0 : -1.0;
  const std::size_t len = w.size();

  fft_inplace(w.samples, false);
  for (std::size_t m = 0; m < len; ++m) {
    const double f_hz = bin_fraction(m, len) * w.sample_rate_hz;
    const double omega = 2.0 * std::numbers::pi * f_hz;
    const double phase = sign * 0.5 * b2_si * omega * omega * length_m;
    w.samples[m] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
  fft_inplace(w.samples, true);
}

void add_white_noise(Waveform& w, double variance_per_sample, RandomStream& rng) {
  if (variance_per_sample <= 0.0) return;
  for (auto& z : w.samples) z += rng.next_cscg(variance_per_sample);
}

Waveform ssfm_propagate(const Waveform& input, const LinkConfig& link,
                        PropagationDirection direction, bool noise, double step_km,
                        RandomStream& rng) {
  link.validate();
  if (!(step_km > 0.0)) throw std::invalid_argument("ssfm: step must be positive");
  if (step_km > link.span_km) throw std::invalid_argument("ssfm: step larger than span");

  const int steps_per_span = static_cast<int>(std::ceil(link.span_km / step_km - 1e-12));
  const double h = link.span_km / steps_per_span;
  const double alpha_np = link.alpha_np_per_km();
  const double l_eff = link.effective_length_km(h);
  const double loss_amp = std::exp(-0.5 * alpha_np * h);        // amplitude per step
  const double span_gain_amp = std::exp(0.5 * alpha_np * link.span_km);
  const double sigma2_sample = link.ase_variance_per_symbol() * input.oversampling;

  Waveform w = input;
  const bool fwd = direction == PropagationDirection::Forward;

  auto half_dispersion = [&](SpectralDirection dir) {
    chromatic_dispersion(w, 0.5 * h, link.dispersion_ps_nm_km, link.wavelength_nm, dir);
  };

  for (int span = 0; span < link.spans; ++span) {
    if (!fwd) {
      // invert the amplifier, then the FBG, then the span itself
      for (auto& z : w.samples) z /= span_gain_amp;
      if (link.per_span_dispersion_compensation) {
        chromatic_dispersion(w, link.span_km, link.dispersion_ps_nm_km, link.wavelength_nm,
                             SpectralDirection::Forward);
      }
    }
    for (int s = 0; s < steps_per_span; ++s) {
      if (fwd) {
        half_dispersion(SpectralDirection::Forward);
        for (auto& z : w.samples) {
          const double phase = link.gamma_w_km * l_eff * std::norm(z);
          z *= loss_amp * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        half_dispersion(SpectralDirection::Forward);
      } else {
        half_dispersion(SpectralDirection::Inverse);
        for (auto& z : w.samples) {
          z /= loss_amp;
          const double phase = -link.gamma_w_km * l_eff * std::norm(z);
          z *= std::complex<double>(std::cos(phase), std::sin(phase));
        }
        half_dispersion(SpectralDirection::Inverse);
      }
    }
    if (fwd) {
      if (link.per_span_dispersion_compensation) {
        chromatic_dispersion(w, link.span_km, link.dispersion_ps_nm_km, link.wavelength_nm,
                             SpectralDirection::Inverse);
      }
      for (auto& z : w.samples) z *= span_gain_amp;
      if (noise) add_white_noise(w, sigma2_sample, rng);
    }
  }
  return w;
}

}  // namespace minfo
