#pragma once

#include "chiral/chain_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chiral {

/// Fully resolved run configuration; every field has a value after parsing.
struct RunConfig {
  int n_atoms = 12;
  double spacing = 3.141592653589793;
  std::string spacing_text = "pi";  // as written, for the manifest
  double gamma_left = 0.0;
  double gamma_right = 1.0;
  int n_excited = 1;
  Placement placement = Placement::End;
  double dt = 0.01;
  double t_end = 100.0;
  double fluctuation = 0.0;
  FluctuationLaw law = FluctuationLaw::Uniform;
  std::uint64_t seed = 1;
  int batch_size = 500;
  int max_realizations = 10000;
  double convergence_tol = 1e-3;
  double plateau_eps = 1e-3;
  double plateau_min_width = 5.0;
  int n_max = 20;
  std::vector<int> n_excited_list{1, 2, 3};

  ChiralRates rates() const { return {gamma_left, gamma_right}; }
  ExcitationPattern pattern() const { return {n_excited, placement}; }
};

/// Default horizon: 100/gamma for the cascaded scheme, 500/gamma otherwise.
double default_t_end(double gamma_left);

/// Angles as JSON numbers or strings such as "pi", "2pi", "pi/2", "0.5*pi", "1.3".
double parse_angle(std::string_view text);

/// Validates a JSON document, fills defaults and rejects unknown keys.
/// A run manifest is also accepted; its recorded "config" is used.
RunConfig parse_config_json(const nlohmann::json& document);
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::filesystem::path& path);

/// Re-checks cross-field rules after command-line overrides.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

}  // namespace chiral
