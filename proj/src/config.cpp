#include "chiral/config.hpp"

#include "chiral/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

namespace chiral {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "N",          "xi",        "gammaL",           "gammaR",          "Ni",
      "placement",  "dt",        "t_end",            "f",               "fluctuation_law",
      "seed",       "batch_size", "max_realizations", "convergence_tol", "plateau_eps",
      "plateau_min_width",       "N_max",            "Ni_list"};
  return keys;
}

[[noreturn]] void schema_error(const std::string& field, const std::string& reason) {
  throw Error(ErrorCode::Schema, "field '" + field + "': " + reason);
}

double number(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) schema_error(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_error(key, "must be finite");
  return x;
}

int integer(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) schema_error(key, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    schema_error(key, "out of range");
  }
  return static_cast<int>(x);
}

}  // namespace

double default_t_end(double gamma_left) { return gamma_left == 0.0 ? 100.0 : 500.0; }

double parse_angle(std::string_view text) {
  static const std::regex pi_form(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*|\.\d+))?\s*$)",
      std::regex::icase);
  static const std::regex plain(R"(^\s*[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\s*$)");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, pi_form)) {
    const double factor = m[1].matched ? std::stod(m[1].str()) : 1.0;
    const double divisor = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (divisor == 0.0) {
      throw Error(ErrorCode::Schema, "angle '" + s + "' divides by zero");
    }
    return factor * std::numbers::pi / divisor;
  }
  if (std::regex_match(s, plain)) return std::stod(s);
  throw Error(ErrorCode::Schema, "cannot parse angle '" + s + "'");
}

void validate(const RunConfig& c) {
  if (c.n_atoms < 1) schema_error("N", "must be >= 1");
  if (!(c.spacing > 0.0) || !std::isfinite(c.spacing)) schema_error("xi", "must be > 0");
  if (!(c.gamma_left >= 0.0)) schema_error("gammaL", "must be >= 0");
  if (!(c.gamma_right >= 0.0)) schema_error("gammaR", "must be >= 0");
  if (c.gamma_left == 0.0 && c.gamma_right == 0.0) {
    schema_error("gammaR", "gammaL and gammaR cannot both be zero");
  }
  if (c.n_excited < 1 || c.n_excited > c.n_atoms) schema_error("Ni", "must satisfy 1 <= Ni <= N");
  if (c.placement == Placement::Central && (c.n_atoms - c.n_excited) % 2 != 0) {
    schema_error("placement", "central excitation needs N - Ni even (unequal flanks)");
  }
  if (!(c.dt > 0.0)) schema_error("dt", "must be > 0");
  if (!(c.t_end > 0.0)) schema_error("t_end", "must be > 0");
  const double ratio = c.t_end / c.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || ratio < 1.0) {
    schema_error("t_end", "must be a positive integer multiple of dt");
  }
  if (!(c.fluctuation >= 0.0) || !(c.fluctuation < 1.0)) schema_error("f", "must be in [0, 1)");
  if (c.batch_size < 1) schema_error("batch_size", "must be >= 1");
  if (c.max_realizations < 1) schema_error("max_realizations", "must be >= 1");
  if (!(c.convergence_tol > 0.0)) schema_error("convergence_tol", "must be > 0");
  if (!(c.plateau_eps > 0.0)) schema_error("plateau_eps", "must be > 0");
  if (!(c.plateau_min_width >= 0.0)) schema_error("plateau_min_width", "must be >= 0");
  if (c.n_max < 1) schema_error("N_max", "must be >= 1");
  if (c.n_excited_list.empty()) schema_error("Ni_list", "must not be empty");
  for (int ni : c.n_excited_list) {
    if (ni < 1) schema_error("Ni_list", "entries must be >= 1");
  }
}

RunConfig parse_config_json(const json& document) {
  if (!document.is_object()) {
    throw Error(ErrorCode::Schema, "configuration must be a JSON object");
  }
  if (document.contains("manifest_version")) {
    if (!document.contains("config")) {
      throw Error(ErrorCode::Schema, "manifest has no recorded config");
    }
    return parse_config_json(document.at("config"));
  }
  for (const auto& item : document.items()) {
    if (!known_keys().contains(item.key())) schema_error(item.key(), "unknown key");
  }

  RunConfig c;
  if (document.contains("N")) c.n_atoms = integer(document, "N");
  if (document.contains("xi")) {
    const json& xi = document.at("xi");
    if (xi.is_string()) {
      c.spacing_text = xi.get<std::string>();
      try {
        c.spacing = parse_angle(c.spacing_text);
      } catch (const Error& e) {
        schema_error("xi", e.what());
      }
    } else {
      c.spacing = number(document, "xi");
      std::ostringstream os;
      os.precision(17);
      os << c.spacing;
      c.spacing_text = os.str();
    }
  }
  if (document.contains("gammaL")) c.gamma_left = number(document, "gammaL");
  if (document.contains("gammaR")) c.gamma_right = number(document, "gammaR");
  if (document.contains("Ni")) c.n_excited = integer(document, "Ni");
  if (document.contains("placement")) {
    const json& p = document.at("placement");
    if (!p.is_string()) schema_error("placement", "expected \"end\" or \"central\"");
    const auto s = p.get<std::string>();
    if (s == "end") {
      c.placement = Placement::End;
    } else if (s == "central") {
      c.placement = Placement::Central;
    } else {
      schema_error("placement", "expected \"end\" or \"central\", got \"" + s + "\"");
    }
  }
  if (document.contains("dt")) c.dt = number(document, "dt");
  c.t_end = document.contains("t_end") ? number(document, "t_end") : default_t_end(c.gamma_left);
  if (document.contains("f")) c.fluctuation = number(document, "f");
  if (document.contains("fluctuation_law")) {
    const json& law = document.at("fluctuation_law");
    const std::string s = law.is_string() ? law.get<std::string>() : "";
    if (s == "uniform") {
      c.law = FluctuationLaw::Uniform;
    } else if (s == "gaussian") {
      c.law = FluctuationLaw::Gaussian;
    } else {
      schema_error("fluctuation_law", "expected \"uniform\" or \"gaussian\"");
    }
  }
  if (document.contains("seed")) {
    const json& s = document.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      schema_error("seed", "expected a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  if (document.contains("batch_size")) c.batch_size = integer(document, "batch_size");
  if (document.contains("max_realizations")) {
    c.max_realizations = integer(document, "max_realizations");
  }
  if (document.contains("convergence_tol")) {
    c.convergence_tol = number(document, "convergence_tol");
  }
  if (document.contains("plateau_eps")) c.plateau_eps = number(document, "plateau_eps");
  if (document.contains("plateau_min_width")) {
    c.plateau_min_width = number(document, "plateau_min_width");
  }
  if (document.contains("N_max")) c.n_max = integer(document, "N_max");
  if (document.contains("Ni_list")) {
    const json& list = document.at("Ni_list");
    if (!list.is_array()) schema_error("Ni_list", "expected an array of integers");
    c.n_excited_list.clear();
    for (const auto& v : list) {
      if (!v.is_number_integer()) schema_error("Ni_list", "expected an array of integers");
      c.n_excited_list.push_back(v.get<int>());
    }
  }
  validate(c);
  return c;
}

RunConfig parse_config_text(std::string_view text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("invalid JSON: ") + e.what());
  }
  return parse_config_json(document);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open config file '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

json to_json(const RunConfig& c) {
  json j;
  j["N"] = c.n_atoms;
  j["xi"] = c.spacing_text;
  j["gammaL"] = c.gamma_left;
  j["gammaR"] = c.gamma_right;
  j["Ni"] = c.n_excited;
  j["placement"] = c.placement == Placement::End ? "end" : "central";
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["f"] = c.fluctuation;
  j["fluctuation_law"] = c.law == FluctuationLaw::Uniform ? "uniform" : "gaussian";
  j["seed"] = c.seed;
  j["batch_size"] = c.batch_size;
  j["max_realizations"] = c.max_realizations;
  j["convergence_tol"] = c.convergence_tol;
  j["plateau_eps"] = c.plateau_eps;
  j["plateau_min_width"] = c.plateau_min_width;
  j["N_max"] = c.n_max;
  j["Ni_list"] = c.n_excited_list;
  return j;
}

}  // namespace chiral
