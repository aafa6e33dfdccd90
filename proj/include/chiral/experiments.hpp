#pragma once

#include "chiral/config.hpp"
#include "chiral/csv.hpp"
#include "chiral/svg.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chiral {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Preset { Fig2, Fig3, Fig4, Fig5, Fig6, Custom };

Preset parse_preset(std::string_view name);
std::string_view to_string(Preset preset);

/// Everything needed to reproduce an invocation.
struct RunManifest {
  std::string command;
  std::string preset;
  RunConfig config;
  std::optional<double> t_end_override;  // presets only
  int workers = 1;
  double wall_clock_seconds = 0.0;
  nlohmann::json convergence = nlohmann::json::array();
  std::vector<std::string> outputs;

  nlohmann::json to_json() const;
};

/// Collects output files for one invocation and prints a summary line per file.
class OutputSink {
public:
  OutputSink(std::filesystem::path root, bool svg, std::ostream& log);

  const std::filesystem::path& root() const noexcept { return root_; }
  bool svg_enabled() const noexcept { return svg_; }
  std::ostream& log() noexcept { return log_; }

  void csv(const std::string& name, const CsvTable& table, const std::string& summary);
  void svg(const std::string& name, const SvgPlot& plot);
  void note(const std::string& line);
  const std::vector<std::string>& files() const noexcept { return files_; }

private:
  std::filesystem::path root_;
  bool svg_;
  std::ostream& log_;
  std::vector<std::string> files_;
};

/// Single trajectory: populations, channel rates, NN/NNN correlations, fit, plateaus.
void run_simulate(const RunConfig& config, OutputSink& out, RunManifest& manifest);
/// Gamma_f against N for each Ni in the list (N from Ni up to N_max).
void run_sweep(const RunConfig& config, OutputSink& out, RunManifest& manifest);
/// Static-disorder ensemble of P_tot with mean and 1-sigma band.
void run_disorder(const RunConfig& config, OutputSink& out, RunManifest& manifest);
/// Eigenvalues, defectiveness and non-normality of V.
void run_spectrum(const RunConfig& config, OutputSink& out, RunManifest& manifest);

/// Figure presets; `base` supplies numerics (dt, seeds, ensemble limits) and,
/// for Custom, the physics as well. t_end_override replaces preset horizons.
void run_experiment(Preset preset, const RunConfig& base, std::optional<double> t_end_override,
                    OutputSink& out, RunManifest& manifest);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

}  // namespace chiral
