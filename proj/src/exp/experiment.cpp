#include "minfo/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "minfo/parallel.hpp"
#include "minfo/special.hpp"

namespace minfo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const json& require_field(const json& j, const std::string& key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) fail("missing required field '" + ctx + key + "'");
  return *it;
}

double number_field(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require_field(j, key, ctx);
  if (!v.is_number()) fail("field '" + ctx + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double def) {
  auto it = j.find(key);
  if (it == j.end()) return def;
  if (!it->is_number()) fail("field '" + key + "' must be a number");
  return it->get<double>();
}

std::string string_field(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require_field(j, key, ctx);
  if (!v.is_string()) fail("field '" + ctx + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string channel_preset_name(ChannelPreset p) {
  switch (p) {
    case ChannelPreset::Awgn: return "awgn";
    case ChannelPreset::Mimo2x2: return "mimo2x2";
    case ChannelPreset::ZeroDispersion: return "zero-dispersion";
    case ChannelPreset::Dispersive: return "dispersive";
    case ChannelPreset::Realistic: return "realistic";
    case ChannelPreset::Custom: return "custom";
  }
  return "unknown";
}

ChannelPreset channel_preset_from_name(const std::string& name) {
  if (name == "awgn") return ChannelPreset::Awgn;
  if (name == "mimo2x2") return ChannelPreset::Mimo2x2;
  if (name == "zero-dispersion") return ChannelPreset::ZeroDispersion;
  if (name == "dispersive") return ChannelPreset::Dispersive;
  if (name == "realistic") return ChannelPreset::Realistic;
  if (name == "custom") return ChannelPreset::Custom;
  fail("unknown preset '" + name + "'");
}

int EstimatorSpec::resolved_p(std::size_t n) const {
  if (p > 0) return p;
  return static_cast<int>(p_fraction * static_cast<double>(n));
}

std::string EstimatorSpec::label() const {
  std::string base = estimator_method_name(method);
  if (method == EstimatorMethod::Glb) {
    return block > 1 ? base + "[b=" + std::to_string(block) + "]" : base;
  }
  std::string tag = "[k=" + std::to_string(k);
  if (block > 1) tag += ",b=" + std::to_string(block);
  return base + tag + "]";
}

std::vector<int> ExperimentSpec::block_sizes() const {
  std::vector<int> blocks;
  for (const auto& e : estimators) {
    if (std::find(blocks.begin(), blocks.end(), e.block) == blocks.end()) {
      blocks.push_back(e.block);
    }
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

std::size_t ExperimentSpec::joint_dim(int block) const {
  switch (preset) {
    case ChannelPreset::Mimo2x2: return 8;
    case ChannelPreset::Dispersive: return 2 + 2 * static_cast<std::size_t>(block);
    default: return 4;
  }
}

void ExperimentSpec::validate() const {
  if (sweep.points.empty()) fail("'sweep.points' must be non-empty");
  if (n < 100) fail("'n' must be at least 100");
  if (estimators.empty()) fail("'estimators' must be non-empty");

  const bool waveform_preset =
      preset == ChannelPreset::Dispersive || preset == ChannelPreset::Realistic;
  if (waveform_preset) {
    link.validate();
    if (oversampling < 4) fail("'dsp.oversampling' must be >= 4");
    if (rolloff < 0.0 || rolloff > 1.0) fail("'dsp.rolloff' must be in [0, 1]");
    // bandwidth guard: the shaped spectrum (1 + rolloff) Rs / 2 on each side
    // must fit the sampled band with margin
    if ((1.0 + rolloff) / 2.0 > 0.5 * oversampling * 0.9) {
      fail("'dsp.oversampling' too small for the configured rolloff");
    }
  }
  if (preset == ChannelPreset::ZeroDispersion) link.validate();
  if (preset == ChannelPreset::Realistic) {
    if (!link.per_span_dispersion_compensation) {
      fail("'link.fbg' must be true for the realistic preset");
    }
    if (!(step_km > 0.0) || step_km > link.span_km) {
      fail("'dsp.step_km' must be in (0, span_km]");
    }
  }

  switch (preset) {
    case ChannelPreset::Awgn:
      if (sweep.kind != SweepSpec::Kind::SnrDb) fail("'sweep.kind' must be snr_db for awgn");
      break;
    case ChannelPreset::Mimo2x2:
      if (sweep.kind != SweepSpec::Kind::AlphaRad) {
        fail("'sweep.kind' must be alpha_rad for mimo2x2");
      }
      break;
    case ChannelPreset::ZeroDispersion:
    case ChannelPreset::Realistic:
      if (sweep.kind != SweepSpec::Kind::PowerDbm) {
        fail("'sweep.kind' must be power_dbm for " + channel_preset_name(preset));
      }
      break;
    case ChannelPreset::Dispersive:
      if (sweep.kind != SweepSpec::Kind::Spans) fail("'sweep.kind' must be spans for dispersive");
      for (double v : sweep.points) {
        if (v < 1.0 || v != std::floor(v)) fail("'sweep.points' must be positive span counts");
      }
      break;
    case ChannelPreset::Custom:
      fail("'preset' custom requires a 'channel' field naming the generator");
  }

  for (const auto& e : estimators) {
    const std::string where = "estimators[" + e.label() + "]";
    if (e.k < 1 || static_cast<std::size_t>(e.k) >= n) fail("'" + where + ".k' out of [1, n-1]");
    if (e.block < 1 || e.block % 2 == 0) {
      if (e.block != 1) fail("'" + where + ".block' must be odd");
    }
    if (e.block > 1 && preset != ChannelPreset::Dispersive) {
      fail("'" + where + ".block' only applies to the dispersive preset");
    }
    if (e.method == EstimatorMethod::LocalGaussian) {
      const int p_resolved = e.resolved_p(n);
      const std::size_t dj = joint_dim(e.block);
      if (p_resolved < static_cast<int>(dj) + 1 || static_cast<std::size_t>(p_resolved) >= n) {
        fail("'" + where + "': p=" + std::to_string(p_resolved) +
             " violates d+1 <= p <= n-1 for joint dimension " + std::to_string(dj));
      }
    }
    if (e.method == EstimatorMethod::Glb && e.block > 1) {
      fail("'" + where + "': glb is symbolwise (block must be 1)");
    }
  }

  if (input_kind == InputDistribution::Kind::Qam) {
    InputDistribution probe{InputDistribution::Kind::Qam, 1e-3, qam_order};
    probe.validate();
  }
}

// ---- parsing ---------------------------------------------------------------

namespace {

SweepSpec parse_sweep(const json& j) {
  SweepSpec sweep;
  const std::string kind = string_field(j, "kind", "sweep.");
  if (kind == "snr_db") {
    sweep.kind = SweepSpec::Kind::SnrDb;
  } else if (kind == "power_dbm") {
    sweep.kind = SweepSpec::Kind::PowerDbm;
  } else if (kind == "alpha_rad") {
    sweep.kind = SweepSpec::Kind::AlphaRad;
  } else if (kind == "spans") {
    sweep.kind = SweepSpec::Kind::Spans;
  } else {
    fail("field 'sweep.kind' must be one of snr_db|power_dbm|alpha_rad|spans");
  }
  if (j.contains("points")) {
    const json& pts = j.at("points");
    if (!pts.is_array() || pts.empty()) fail("field 'sweep.points' must be a non-empty array");
    for (const auto& v : pts) {
      if (!v.is_number()) fail("field 'sweep.points' must contain numbers");
      sweep.points.push_back(v.get<double>());
    }
  } else {
    const double start = number_field(j, "start", "sweep.");
    const double stop = number_field(j, "stop", "sweep.");
    const double step = number_field(j, "step", "sweep.");
    if (!(step > 0.0) || stop < start) fail("field 'sweep' start/stop/step invalid");
    for (double v = start; v <= stop + 1e-9 * step; v += step) sweep.points.push_back(v);
  }
  return sweep;
}

EstimatorSpec parse_estimator(const json& j) {
  EstimatorSpec e;
  const std::string method = string_field(j, "method", "estimators[].");
  try {
    e.method = estimator_method_from_name(method);
  } catch (const std::invalid_argument& ex) {
    fail(std::string("field 'estimators[].method': ") + ex.what());
  }
  e.k = static_cast<int>(number_or(j, "k", e.k));
  e.p = static_cast<int>(number_or(j, "p", 0));
  e.p_fraction = number_or(j, "p_fraction", e.p_fraction);
  e.integration_samples = static_cast<int>(number_or(j, "integration_samples", 1024));
  e.block = static_cast<int>(number_or(j, "block", 1));
  if (j.contains("metric")) {
    try {
      e.metric = metric_from_name(j.at("metric").get<std::string>());
    } catch (const std::invalid_argument& ex) {
      fail(std::string("field 'estimators[].metric': ") + ex.what());
    }
  }
  return e;
}

LinkConfig parse_link(const json& j) {
  LinkConfig link;
  link.span_km = number_field(j, "span_km", "link.");
  link.spans = static_cast<int>(number_field(j, "spans", "link."));
  link.attenuation_db_km = number_or(j, "attenuation_db_km", 0.2);
  link.dispersion_ps_nm_km = number_or(j, "dispersion_ps_nm_km", 0.0);
  link.gamma_w_km = number_or(j, "gamma_w_km", 0.0);
  link.noise_figure_db = number_field(j, "noise_figure_db", "link.");
  link.symbol_rate_baud = number_field(j, "symbol_rate_gbd", "link.") * 1e9;
  link.wavelength_nm = number_or(j, "wavelength_nm", 1550.0);
  if (j.contains("fbg")) {
    if (!j.at("fbg").is_boolean()) fail("field 'link.fbg' must be boolean");
    link.per_span_dispersion_compensation = j.at("fbg").get<bool>();
  }
  return link;
}

}  // namespace

ExperimentSpec parse_spec(const json& j, const std::string& default_name) {
  if (!j.is_object()) fail("spec root must be a JSON object");
  ExperimentSpec spec;
  spec.name = j.contains("name") ? string_field(j, "name", "") : default_name;

  std::string preset = string_field(j, "preset", "");
  spec.preset = channel_preset_from_name(preset);
  if (spec.preset == ChannelPreset::Custom) {
    const std::string channel = string_field(j, "channel", "");
    spec.preset = channel_preset_from_name(channel);
    if (spec.preset == ChannelPreset::Custom) fail("field 'channel' cannot be 'custom'");
  }

  const double n_val = number_field(j, "n", "");
  if (n_val < 1 || n_val != std::floor(n_val)) fail("field 'n' must be a positive integer");
  spec.n = static_cast<std::size_t>(n_val);
  spec.seed = static_cast<std::uint64_t>(number_or(j, "seed", 1));

  const json& input = require_field(j, "input", "");
  const std::string kind = string_field(input, "kind", "input.");
  if (kind == "cscg") {
    spec.input_kind = InputDistribution::Kind::Cscg;
  } else if (kind == "half-gaussian") {
    spec.input_kind = InputDistribution::Kind::HalfGaussian;
  } else if (kind == "qam") {
    spec.input_kind = InputDistribution::Kind::Qam;
    spec.qam_order = static_cast<int>(number_or(input, "order", 64));
  } else {
    fail("field 'input.kind' must be one of cscg|half-gaussian|qam");
  }
  spec.input_power_dbm = number_or(input, "power_dbm", 0.0);
  spec.snr_db = number_or(j, "snr_db", 0.0);

  if (j.contains("link")) spec.link = parse_link(j.at("link"));
  if (j.contains("dsp")) {
    const json& dsp = j.at("dsp");
    spec.rolloff = number_or(dsp, "rolloff", 0.2);
    spec.oversampling = static_cast<int>(number_or(dsp, "oversampling", 4));
    spec.step_km = number_or(dsp, "step_km", 0.1);
  }

  spec.sweep = parse_sweep(require_field(j, "sweep", ""));
  const json& ests = require_field(j, "estimators", "");
  if (!ests.is_array() || ests.empty()) fail("field 'estimators' must be a non-empty array");
  for (const auto& e : ests) spec.estimators.push_back(parse_estimator(e));

  if (j.contains("outputs")) {
    const json& outputs = j.at("outputs");
    spec.outputs.csv = outputs.contains("csv") ? string_field(outputs, "csv", "outputs.") : "";
    spec.outputs.svg = outputs.contains("svg") ? string_field(outputs, "svg", "outputs.") : "";
  }
  if (j.contains("plot")) spec.plot = j.at("plot");

  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::string& path_or_name) {
  std::string path = path_or_name;
  std::ifstream in(path);
  if (!in.good()) {
    path = bundled_preset_path(path_or_name);
    in.open(path);
    if (!in.good()) fail("cannot open spec '" + path_or_name + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& ex) {
    fail("spec '" + path + "' is not valid JSON: " + ex.what());
  }
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_spec(j, stem);
}

// ---- execution --------------------------------------------------------------

namespace {

struct PointOutcome {
  std::vector<ResultRow> rows;
  std::vector<std::string> warnings;
};

EstimateResult run_glb_estimator(const ChannelRun& run, const ExperimentSpec& spec, int threads) {
  if (run.x.dim() == 4) {
    // per-output scalar bound on the pooled symbol streams, reported per pair
    const std::size_t n = run.x.size();
    SampleSet xp(2 * n, 2), yp(2 * n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (int s = 0; s < 2; ++s) {
        xp.at(2 * i + s, 0) = run.x.at(i, 2 * s);
        xp.at(2 * i + s, 1) = run.x.at(i, 2 * s + 1);
        yp.at(2 * i + s, 0) = run.y.at(i, 2 * s);
        yp.at(2 * i + s, 1) = run.y.at(i, 2 * s + 1);
      }
    }
    GaussianAuxChannel aux = fit_gaussian_aux(xp, yp);
    EstimateResult r = glb(xp, yp, aux, threads);
    r.value_bits *= 2.0;
    r.stderr_bits *= 2.0;
    return r;
  }
  GaussianAuxChannel aux = fit_gaussian_aux(run.x, run.y);
  if (spec.input_kind == InputDistribution::Kind::Qam) {
    InputDistribution input{InputDistribution::Kind::Qam, dbm_to_watt(run.power_dbm),
                            spec.qam_order};
    aux.input_model = GaussianAuxChannel::InputModel::Discrete;
    aux.constellation = input.constellation();
    aux.priors.assign(aux.constellation.size(), 1.0 / aux.constellation.size());
  }
  return glb(run.x, run.y, aux, threads);
}

EstimateResult dispatch_estimator(const EstimatorSpec& e, const ChannelRun& run,
                                  const ExperimentSpec& spec, int threads) {
  switch (e.method) {
    case EstimatorMethod::Kozachenko3H:
      if (spec.input_kind == InputDistribution::Kind::Qam) {
        return mi_kl_discrete(run.x, run.y, e.k, e.metric, threads);
      }
      return mi_3h(run.x, run.y, e.k, e.metric, threads);
    case EstimatorMethod::Kraskov:
      return mi_kraskov(run.x, run.y, e.k, threads);
    case EstimatorMethod::LocalGaussian: {
      EstimatorConfig cfg;
      cfg.method = EstimatorMethod::LocalGaussian;
      cfg.k = e.k;
      cfg.p = e.resolved_p(run.x.size());
      cfg.integration_samples = e.integration_samples;
      return mi_local_gaussian(run.x, run.y, cfg, threads);
    }
    case EstimatorMethod::Glb:
      return run_glb_estimator(run, spec, threads);
  }
  throw std::logic_error("unreachable estimator dispatch");
}

PointOutcome run_point(const ExperimentSpec& spec, std::size_t point_index, int threads) {
  const double v = spec.sweep.points[point_index];
  RandomStream rng(spec.seed, point_index);

  InputDistribution input;
  input.kind = spec.input_kind;
  input.qam_order = spec.qam_order;
  input.power_w = dbm_to_watt(spec.input_power_dbm);

  std::vector<ChannelRun> runs;
  switch (spec.preset) {
    case ChannelPreset::Awgn:
      runs.push_back(awgn_channel(input, db_to_linear(v), spec.n, rng));
      break;
    case ChannelPreset::Mimo2x2:
      runs.push_back(mimo2x2_channel(input, db_to_linear(spec.snr_db), v, spec.n, rng));
      break;
    case ChannelPreset::ZeroDispersion:
      input.power_w = dbm_to_watt(v);
      runs.push_back(zero_dispersion_link(input, spec.link, spec.n, rng));
      break;
    case ChannelPreset::Dispersive: {
      LinkConfig link = spec.link;
      link.spans = static_cast<int>(v);
      runs = dispersive_link(input, link, spec.n, spec.block_sizes(), spec.rolloff,
                             spec.oversampling, rng);
      break;
    }
    case ChannelPreset::Realistic:
      input.power_w = dbm_to_watt(v);
      runs.push_back(realistic_link(input, spec.link, spec.n, spec.rolloff, spec.oversampling,
                                    spec.step_km, rng));
      break;
    case ChannelPreset::Custom:
      throw std::logic_error("custom preset should have been resolved at parse time");
  }

  PointOutcome out;
  for (const auto& e : spec.estimators) {
    const ChannelRun* run = nullptr;
    for (const auto& r : runs) {
      if (r.block_size == e.block) {
        run = &r;
        break;
      }
    }
    if (!run) {
      out.warnings.push_back(spec.name + ": no channel run for block " + std::to_string(e.block));
      continue;
    }

    ResultRow row;
    row.preset = spec.name;
    row.point = v;
    row.estimator = e.label();
    row.k = e.method == EstimatorMethod::Glb ? 0 : e.k;
    row.p = e.method == EstimatorMethod::LocalGaussian ? e.resolved_p(spec.n) : 0;
    row.integration_samples =
        e.method == EstimatorMethod::LocalGaussian ? e.integration_samples : 0;
    row.capacity_bits = awgn_capacity_bits(run->snr_reference);
    row.half_gaussian_bits = half_gaussian_bound_bits(run->snr_reference);
    row.seed = spec.seed;

    const auto t0 = std::chrono::steady_clock::now();
    try {
      EstimateResult res = dispatch_estimator(e, *run, spec, threads);
      row.mi_bits = res.value_bits;
      row.stderr_bits = res.stderr_bits;
    } catch (const std::exception& ex) {
      row.mi_bits = std::numeric_limits<double>::quiet_NaN();
      row.stderr_bits = std::numeric_limits<double>::quiet_NaN();
      std::ostringstream msg;
      msg << spec.name << " point " << v << " " << e.label() << ": " << ex.what();
      out.warnings.push_back(msg.str());
    }
    row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::vector<ResultRow> run(const ExperimentSpec& spec_in, const RunOptions& options) {
  ExperimentSpec spec = spec_in;
  if (options.n_override) spec.n = *options.n_override;
  if (options.seed_override) spec.seed = *options.seed_override;
  spec.validate();

  const std::size_t n_points = spec.sweep.points.size();
  const int workers = options.workers > 0 ? options.workers : hardware_threads();
  const int point_workers = static_cast<int>(std::min<std::size_t>(workers, n_points));
  const int inner_threads = std::max(1, workers / point_workers);

  std::vector<PointOutcome> outcomes(n_points);
  parallel_chunks(n_points, point_workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t pi = begin; pi < end; ++pi) {
      outcomes[pi] = run_point(spec, pi, inner_threads);
    }
  });

  std::vector<ResultRow> rows;
  for (auto& outcome : outcomes) {
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
    for (auto& r : outcome.rows) {
      if (!options.timing) r.wall_s = 0.0;
      rows.push_back(std::move(r));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.point != b.point) return a.point < b.point;
    return a.estimator < b.estimator;
  });
  return rows;
}

}  // namespace minfo
