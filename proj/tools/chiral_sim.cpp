// Command-line driver: simulate, sweep, disorder, spectrum, reproduce.

#include "chiral/config.hpp"
#include "chiral/disorder.hpp"
#include "chiral/error.hpp"
#include "chiral/experiments.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_end;
  bool svg = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON configuration (or a previous manifest.json)");
  cmd->add_option("--out", flags.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", flags.seed, "master seed (u64)");
  cmd->add_option("--dt", flags.dt, "time step in units of 1/gamma");
  cmd->add_option("--t-end", flags.t_end, "final time in units of 1/gamma");
  cmd->add_flag("--svg", flags.svg, "also write SVG line plots");
}

chiral::RunConfig resolve(const CommonFlags& flags) {
  chiral::RunConfig config =
      flags.config_path.empty() ? chiral::parse_config_text("{}") : chiral::parse_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.dt) config.dt = *flags.dt;
  if (flags.t_end) config.t_end = *flags.t_end;
  chiral::validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-excitation dynamics of a chirally coupled atomic chain"};
  app.set_version_flag("--version", std::string(chiral::kToolVersion));
  app.require_subcommand(1);

  CommonFlags flags;
  std::string preset_name;
  auto* simulate = app.add_subcommand("simulate", "single trajectory with fit, plateaus, correlations");
  auto* sweep = app.add_subcommand("sweep", "Gamma_f against N for each Ni in Ni_list");
  auto* disorder = app.add_subcommand("disorder", "position-fluctuation ensemble of P_tot");
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and defectiveness of V");
  auto* reproduce = app.add_subcommand("reproduce", "figure presets: fig2 fig3 fig4 fig5 fig6 custom");
  for (auto* cmd : {simulate, sweep, disorder, spectrum, reproduce}) add_common(cmd, flags);
  reproduce->add_option("preset", preset_name, "fig2 | fig3 | fig4 | fig5 | fig6 | custom")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    const chiral::RunConfig config = resolve(flags);
    chiral::OutputSink out(flags.out_dir, flags.svg, std::cout);
    chiral::RunManifest manifest;
    manifest.config = config;
    manifest.workers = chiral::worker_count_from_environment();

    if (*simulate) {
      manifest.command = "simulate";
      chiral::run_simulate(config, out, manifest);
    } else if (*sweep) {
      manifest.command = "sweep";
      chiral::run_sweep(config, out, manifest);
    } else if (*disorder) {
      manifest.command = "disorder";
      chiral::run_disorder(config, out, manifest);
    } else if (*spectrum) {
      manifest.command = "spectrum";
      chiral::run_spectrum(config, out, manifest);
    } else {
      manifest.command = "reproduce";
      chiral::run_experiment(chiral::parse_preset(preset_name), config, flags.t_end, out, manifest);
    }

    manifest.outputs = out.files();
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    chiral::write_manifest(manifest, out.root());
    std::cout << "wrote " << (out.root() / "manifest.json").string() << '\n';
  } catch (const chiral::Error& e) {
    std::cerr << "error: " << chiral::to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
