#include "minfo/channels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "minfo/waveform.hpp"

namespace minfo {
namespace {

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

SampleSet to_sample_set(const std::vector<std::complex<double>>& v) {
  return SampleSet::from_complex(std::span<const std::complex<double>>(v.data(), v.size()));
}

}  // namespace

double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt / 1e-3); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// ---- LinkConfig ------------------------------------------------------------

void LinkConfig::validate() const {
  if (!(span_km > 0.0)) throw std::invalid_argument("link: span_km must be positive");
  if (spans < 1) throw std::invalid_argument("link: spans must be >= 1");
  if (attenuation_db_km < 0.0) throw std::invalid_argument("link: attenuation must be >= 0");
  if (!(noise_figure_db > 0.0)) throw std::invalid_argument("link: noise figure must be > 0 dB");
  if (!(symbol_rate_baud > 0.0)) throw std::invalid_argument("link: symbol rate must be positive");
  if (!(wavelength_nm > 0.0)) throw std::invalid_argument("link: wavelength must be positive");
}

double LinkConfig::alpha_np_per_km() const {
  return attenuation_db_km * std::numbers::ln10 / 10.0;
}

double LinkConfig::span_power_gain() const {
  return std::pow(10.0, attenuation_db_km * span_km / 10.0);
}

double LinkConfig::ase_variance_per_symbol() const {
  const double gain = span_power_gain();
  const double noise_factor = std::pow(10.0, noise_figure_db / 10.0);
  const double nu = kLightSpeed / (wavelength_nm * 1e-9);
  return (gain - 1.0) * kPlanck * nu * noise_factor * symbol_rate_baud;
}

double LinkConfig::effective_length_km(double dz_km) const {
  const double a = alpha_np_per_km();
  if (a == 0.0) return dz_km;
  return (1.0 - std::exp(-a * dz_km)) / a;
}

// ---- InputDistribution -----------------------------------------------------

void InputDistribution::validate() const {
  if (!(power_w > 0.0)) throw std::invalid_argument("input: power must be positive");
  if (kind == Kind::Qam) {
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(qam_order))));
    if (m < 2 || m * m != qam_order || qam_order > 4096) {
      throw std::invalid_argument("input: QAM order must be a square (4, 16, 64, ...)");
    }
  }
}

std::vector<std::complex<double>> InputDistribution::constellation() const {
  if (kind != Kind::Qam) {
    throw std::logic_error("constellation: only defined for QAM inputs");
  }
  validate();
  const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(qam_order))));
  // odd levels +-1, +-3, ...; mean symbol energy is 2(M-1)/3 before scaling
  const double scale = std::sqrt(power_w * 3.0 / (2.0 * (qam_order - 1)));
  std::vector<std::complex<double>> points;
  points.reserve(qam_order);
  for (int i = 0; i < m; ++i) {
    for (int q = 0; q < m; ++q) {
      points.emplace_back(scale * (2 * i - m + 1), scale * (2 * q - m + 1));
    }
  }
  return points;
}

std::complex<double> InputDistribution::sample(RandomStream& rng) const {
  switch (kind) {
    case Kind::Cscg:
      return rng.next_cscg(power_w);
    case Kind::HalfGaussian: {
      const double amplitude = std::sqrt(power_w) * std::fabs(rng.next_normal());
      const double phase = 2.0 * std::numbers::pi * rng.next_uniform();
      return std::polar(amplitude, phase);
    }
    case Kind::Qam:
      break;
  }
  const auto points = constellation();
  return points[rng.next_below(points.size())];
}

std::vector<std::complex<double>> InputDistribution::sample_n(std::size_t n,
                                                              RandomStream& rng) const {
  validate();
  std::vector<std::complex<double>> out;
  out.reserve(n);
  if (kind == Kind::Qam) {
    const auto points = constellation();
    for (std::size_t i = 0; i < n; ++i) out.push_back(points[rng.next_below(points.size())]);
  } else {
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample(rng));
  }
  return out;
}

// ---- memoryless channels ---------------------------------------------------

ChannelRun awgn_channel(const InputDistribution& input, double snr, std::size_t n,
                        RandomStream& rng) {
  input.validate();
  if (!(snr > 0.0)) throw std::invalid_argument("awgn_channel: snr must be positive");
  if (n < 1) throw std::invalid_argument("awgn_channel: n must be >= 1");

  const double noise_var = std::isinf(snr) ? 0.0 : input.power_w / snr;
  std::vector<std::complex<double>> xs = input.sample_n(n, rng);
  std::vector<std::complex<double>> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    ys[i] = xs[i] + (noise_var > 0.0 ? rng.next_cscg(noise_var) : std::complex<double>{0.0, 0.0});
  }
  ChannelRun run{to_sample_set(xs), to_sample_set(ys), snr, watt_to_dbm(input.power_w)};
  return run;
}

ChannelRun mimo2x2_channel(const InputDistribution& input, double snr, double alpha,
                           std::size_t n, RandomStream& rng) {
  input.validate();
  if (!(snr > 0.0)) throw std::invalid_argument("mimo2x2_channel: snr must be positive");
  if (alpha < 0.0 || alpha > std::numbers::pi) {
    throw std::invalid_argument("mimo2x2_channel: alpha must be in [0, pi]");
  }

  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const double noise_var = std::isinf(snr) ? 0.0 : input.power_w / snr;

  SampleSet x(n, 4), y(n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> x1 = input.sample(rng);
    const std::complex<double> x2 = input.sample(rng);
    std::complex<double> y1 = c * x1 + s * x2;
    std::complex<double> y2 = -s * x1 + c * x2;
    if (noise_var > 0.0) {
      y1 += rng.next_cscg(noise_var);
      y2 += rng.next_cscg(noise_var);
    }
    x.at(i, 0) = x1.real();
    x.at(i, 1) = x1.imag();
    x.at(i, 2) = x2.real();
    x.at(i, 3) = x2.imag();
    y.at(i, 0) = y1.real();
    y.at(i, 1) = y1.imag();
    y.at(i, 2) = y2.real();
    y.at(i, 3) = y2.imag();
  }
  return {std::move(x), std::move(y), snr, watt_to_dbm(input.power_w)};
}

ChannelRun zero_dispersion_link(const InputDistribution& input, const LinkConfig& link,
                                std::size_t n, RandomStream& rng) {
  input.validate();
  link.validate();

  const double sqrt_a = std::sqrt(1.0 / link.span_power_gain());  // span amplitude loss
  const double l_eff = link.effective_length_km(link.span_km);
  const double sigma2 = link.ase_variance_per_symbol();

  std::vector<std::complex<double>> xs = input.sample_n(n, rng);
  std::vector<std::complex<double>> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> u = xs[i];
    for (int span = 0; span < link.spans; ++span) {
      const double phase = link.gamma_w_km * l_eff * std::norm(u);
      u *= sqrt_a * std::complex<double>(std::cos(phase), std::sin(phase));
      u = u / sqrt_a + rng.next_cscg(sigma2);
    }
    ys[i] = u;
  }
  const double snr_ref = input.power_w / (link.spans * sigma2);
  return {to_sample_set(xs), to_sample_set(ys), snr_ref, watt_to_dbm(input.power_w)};
}

// ---- waveform channels -----------------------------------------------------

std::vector<ChannelRun> dispersive_link(const InputDistribution& input, const LinkConfig& link,
                                        std::size_t n, const std::vector<int>& block_sizes,
                                        double rolloff, int oversampling, RandomStream& rng) {
  input.validate();
  link.validate();
  if (block_sizes.empty()) throw std::invalid_argument("dispersive_link: no block sizes");
  for (int b : block_sizes) {
    if (b < 1 || b % 2 == 0) {
      throw std::invalid_argument("dispersive_link: block sizes must be odd and >= 1");
    }
    if (static_cast<std::size_t>(b) >= n) {
      throw std::invalid_argument("dispersive_link: block larger than sample count");
    }
  }

  // pad to a power-of-two waveform with extra random symbols so the circular
  // propagation stays statistically stationary
  const std::size_t os = static_cast<std::size_t>(oversampling);
  const std::size_t n_pad = next_pow2(n * os) / os;
  std::vector<std::complex<double>> symbols = input.sample_n(n_pad, rng);

  Waveform w = shape_pulse(symbols, link.symbol_rate_baud, rolloff, oversampling);
  const double sigma2_sym = link.ase_variance_per_symbol();
  for (int span = 0; span < link.spans; ++span) {
    chromatic_dispersion(w, link.span_km, link.dispersion_ps_nm_km, link.wavelength_nm,
                         SpectralDirection::Forward);
    add_white_noise(w, sigma2_sym * oversampling, rng);
  }
  const std::vector<std::complex<double>> received =
      matched_filter_sample(w, link.symbol_rate_baud, rolloff, n);

  const double snr_ref = input.power_w / (link.spans * sigma2_sym);
  const double power_dbm = watt_to_dbm(input.power_w);

  std::vector<ChannelRun> runs;
  runs.reserve(block_sizes.size());
  for (int b : block_sizes) {
    const std::size_t half = static_cast<std::size_t>(b / 2);
    const std::size_t rows = n - 2 * half;
    SampleSet xs(rows, 2), ys(rows, 2 * static_cast<std::size_t>(b));
    for (std::size_t i = 0; i < rows; ++i) {
      const std::size_t center = i + half;
      xs.at(i, 0) = symbols[center].real();
      xs.at(i, 1) = symbols[center].imag();
      for (int j = 0; j < b; ++j) {
        const std::complex<double> v = received[center - half + j];
        ys.at(i, 2 * j) = v.real();
        ys.at(i, 2 * j + 1) = v.imag();
      }
    }
    ChannelRun run{std::move(xs), std::move(ys), snr_ref, power_dbm, b};
    runs.push_back(std::move(run));
  }
  return runs;
}

ChannelRun realistic_link(const InputDistribution& input, const LinkConfig& link, std::size_t n,
                          double rolloff, int oversampling, double step_km, RandomStream& rng) {
  input.validate();
  link.validate();
  if (!link.per_span_dispersion_compensation) {
    throw std::invalid_argument("realistic_link: per-span dispersion compensation required");
  }

  const std::size_t os = static_cast<std::size_t>(oversampling);
  const std::size_t n_pad = next_pow2(n * os) / os;
  std::vector<std::complex<double>> symbols = input.sample_n(n_pad, rng);

  Waveform w = shape_pulse(symbols, link.symbol_rate_baud, rolloff, oversampling);
  w = ssfm_propagate(w, link, PropagationDirection::Forward, true, step_km, rng);
  w = ssfm_propagate(w, link, PropagationDirection::Backward, false, step_km, rng);
  const std::vector<std::complex<double>> received =
      matched_filter_sample(w, link.symbol_rate_baud, rolloff, n);

  symbols.resize(n);
  const double snr_ref = input.power_w / (link.spans * link.ase_variance_per_symbol());
  return {to_sample_set(symbols), to_sample_set(received), snr_ref,
          watt_to_dbm(input.power_w)};
}

}  // namespace minfo
