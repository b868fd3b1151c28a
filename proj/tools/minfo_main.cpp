#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "minfo/experiment.hpp"

namespace {

int cmd_run(const std::string& spec_arg, const minfo::RunOptions& options,
            const std::string& out_dir) {
  minfo::ExperimentSpec spec = minfo::load_spec(spec_arg);
  const auto rows = minfo::run(spec, options);

  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  const std::string csv_name =
      spec.outputs.csv.empty() ? spec.name + ".csv" : spec.outputs.csv;
  const fs::path csv_path = dir / csv_name;
  minfo::write_csv(rows, csv_path.string());
  std::cout << "wrote " << csv_path.string() << " (" << rows.size() << " rows)\n";

  if (!spec.outputs.svg.empty()) {
    const fs::path svg_path = dir / spec.outputs.svg;
    std::vector<std::string> warnings;
    minfo::render_plot(rows, spec.plot, svg_path.string(), &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << svg_path.string() << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& spec_arg) {
  minfo::ExperimentSpec spec = minfo::load_spec(spec_arg);
  std::cout << spec.name << ": ok (" << spec.sweep.points.size() << " sweep points, "
            << spec.estimators.size() << " estimators, n=" << spec.n << ")\n";
  return 0;
}

int cmd_list_presets() {
  const auto names = minfo::bundled_preset_names();
  if (names.empty()) {
    std::cout << "no presets found in " << minfo::preset_directory() << "\n";
    return 0;
  }
  for (const auto& n : names) std::cout << n << "\n";
  return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& plot_cfg_path,
             std::string svg_path) {
  const auto rows = minfo::read_csv(csv_path);
  nlohmann::json cfg;
  {
    std::ifstream in(plot_cfg_path);
    if (!in.good()) throw minfo::ConfigError("cannot open plot config " + plot_cfg_path);
    try {
      in >> cfg;
    } catch (const nlohmann::json::parse_error& ex) {
      throw minfo::ConfigError(std::string("plot config is not valid JSON: ") + ex.what());
    }
  }
  if (svg_path.empty()) {
    svg_path = csv_path.substr(0, csv_path.find_last_of('.')) + ".svg";
  }
  std::vector<std::string> warnings;
  minfo::render_plot(rows, cfg, svg_path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "wrote " << svg_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-parametric MI estimation bench for optical channel experiments"};
  app.require_subcommand(1);

  std::string spec_arg, out_dir, csv_arg, plot_cfg_arg, svg_arg;
  minfo::RunOptions options;
  std::size_t n_override = 0;
  std::uint64_t seed_override = 0;
  bool have_seed = false;

  auto* run_cmd = app.add_subcommand("run", "execute an experiment spec");
  run_cmd->add_option("spec", spec_arg, "spec file or bundled preset name")->required();
  run_cmd->add_option("--n-override", n_override, "replace the sample count per point");
  run_cmd->add_option("--workers", options.workers, "worker threads (0 = all cores)");
  run_cmd->add_option("--out-dir", out_dir, "output directory");
  run_cmd->add_option("--seed", seed_override, "replace the spec seed")
      ->each([&](const std::string&) { have_seed = true; });
  run_cmd->add_flag("--timing", options.timing,
                    "record measured wall time per row in the CSV (breaks byte-determinism)");

  auto* validate_cmd = app.add_subcommand("validate", "parse and validate a spec");
  validate_cmd->add_option("spec", spec_arg, "spec file or bundled preset name")->required();

  app.add_subcommand("list-presets", "list bundled experiment presets");

  auto* plot_cmd = app.add_subcommand("plot", "render an SVG from a results CSV");
  plot_cmd->add_option("csv", csv_arg, "results CSV")->required();
  plot_cmd->add_option("config", plot_cfg_arg, "plot config JSON")->required();
  plot_cmd->add_option("--out", svg_arg, "output SVG path");

  try {
    app.parse(argc, argv);
    if (n_override > 0) options.n_override = n_override;
    if (have_seed) options.seed_override = seed_override;

    if (run_cmd->parsed()) return cmd_run(spec_arg, options, out_dir);
    if (validate_cmd->parsed()) return cmd_validate(spec_arg);
    if (app.get_subcommand("list-presets")->parsed()) return cmd_list_presets();
    if (plot_cmd->parsed()) return cmd_plot(csv_arg, plot_cfg_arg, svg_arg);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const minfo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
