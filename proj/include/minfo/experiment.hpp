#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "minfo/channels.hpp"
#include "minfo/estimators.hpp"

namespace minfo {

/// Configuration problem: bad preset file, invalid field, unknown name.
/// Maps to CLI exit code 1 (runtime failures map to 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ChannelPreset { Awgn, Mimo2x2, ZeroDispersion, Dispersive, Realistic, Custom };

std::string channel_preset_name(ChannelPreset p);
ChannelPreset channel_preset_from_name(const std::string& name);

struct SweepSpec {
  enum class Kind { SnrDb, PowerDbm, AlphaRad, Spans };
  Kind kind = Kind::SnrDb;
  std::vector<double> points;
};

struct EstimatorSpec {
  EstimatorMethod method = EstimatorMethod::Kozachenko3H;
  int k = 4;
  int p = 0;                  // absolute local-gaussian neighborhood; 0 = fraction
  double p_fraction = 0.04;
  int integration_samples = 1024;
  Metric metric = Metric::MaxNorm;
  int block = 1;              // output block width (dispersive preset)

  int resolved_p(std::size_t n) const;
  std::string label() const;
};

struct OutputSpec {
  std::string csv;
  std::string svg;
};

struct ExperimentSpec {
  std::string name;
  ChannelPreset preset = ChannelPreset::Awgn;
  std::size_t n = 0;
  std::uint64_t seed = 1;

  InputDistribution::Kind input_kind = InputDistribution::Kind::Cscg;
  double input_power_dbm = 0.0;  // ignored when the sweep sets the power
  int qam_order = 64;
  double snr_db = 0.0;  // fixed SNR (mimo2x2, and awgn when power is swept)

  LinkConfig link;
  double rolloff = 0.2;
  int oversampling = 4;
  double step_km = 0.1;

  SweepSpec sweep;
  std::vector<EstimatorSpec> estimators;
  OutputSpec outputs;
  nlohmann::json plot;  // optional rendering config

  /// Output block widths needed by the estimator list (dispersive preset).
  std::vector<int> block_sizes() const;
  /// Joint (X,Y) dimension for a given block width.
  std::size_t joint_dim(int block) const;
  void validate() const;  // throws ConfigError naming the offending field
};

/// Parses and validates a spec; bare names resolve against the bundled
/// preset directory.
ExperimentSpec load_spec(const std::string& path_or_name);
ExperimentSpec parse_spec(const nlohmann::json& j, const std::string& default_name);

struct ResultRow {
  std::string preset;
  double point = 0.0;
  std::string estimator;
  int k = 0, p = 0, integration_samples = 0;
  double mi_bits = 0.0;
  double stderr_bits = 0.0;
  double capacity_bits = 0.0;
  double half_gaussian_bits = 0.0;
  double wall_s = 0.0;
  std::uint64_t seed = 0;
};

struct RunOptions {
  std::optional<std::size_t> n_override;
  std::optional<std::uint64_t> seed_override;
  int workers = 0;        // 0 = hardware threads
  /// Measured wall time per row goes into the CSV only when set; the default
  /// keeps repeat runs byte-identical.
  bool timing = false;
};

/// Executes the sweep. Per-point estimator failures become NaN rows (with a
/// warning on stderr) and the run continues; rows come back sorted by
/// (point, estimator label).
std::vector<ResultRow> run(const ExperimentSpec& spec, const RunOptions& options = {});

// ---- CSV (RFC 4180, fixed column order, '.' decimal separator) ------------

std::string csv_header();
std::string csv_line(const ResultRow& row);
/// Atomic overwrite: writes a temp file then renames it into place.
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_csv(const std::string& path);

// ---- SVG rendering ----------------------------------------------------------

/// Renders MI-vs-point polylines (one series per estimator label) plus the
/// dashed reference curves; deterministic byte output. Points with NaN MI
/// are omitted with a warning appended to `warnings` when given.
void render_plot(const std::vector<ResultRow>& rows, const nlohmann::json& plot_cfg,
                 const std::string& svg_path, std::vector<std::string>* warnings = nullptr);

// ---- bundled presets --------------------------------------------------------

std::string preset_directory();
std::vector<std::string> bundled_preset_names();
std::string bundled_preset_path(const std::string& name);

}  // namespace minfo
