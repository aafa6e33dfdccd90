#include "chiral/experiments.hpp"

#include "chiral/analysis.hpp"
#include "chiral/disorder.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/error.hpp"
#include "chiral/spectrum.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace chiral {

using nlohmann::json;

namespace {

std::string scheme_name(double gamma_left) {
  return gamma_left == 0.0 ? "cascaded" : "noncascaded";
}

std::string describe(const RunConfig& c) {
  std::ostringstream os;
  os << "N=" << c.n_atoms << " Ni=" << c.n_excited << " gL=" << c.gamma_left
     << " gR=" << c.gamma_right << " xi=" << c.spacing_text
     << (c.placement == Placement::Central ? " central" : " end");
  if (c.fluctuation > 0.0) os << " f=" << c.fluctuation;
  return os.str();
}

ChainGeometry geometry_of(const RunConfig& c) {
  return build_positions(c.n_atoms, c.spacing, c.fluctuation, c.seed, c.law);
}

struct FittedRun {
  TimeSeries total;
  DecayFit fit;
  double t_end = 0.0;
};

// Doubles the horizon until P_tot reaches the fit threshold.
FittedRun fit_with_extension(const RunConfig& c) {
  const CouplingMatrix v = build_coupling_matrix(geometry_of(c), c.rates());
  const Eigen::VectorXcd a0 = build_initial_state(c.pattern(), c.n_atoms);
  double t_end = c.t_end;
  for (int attempt = 0;; ++attempt) {
    const TimeGrid grid(t_end, c.dt);
    TimeSeries total{grid.times(), evolve_total_population(v, a0, grid)};
    try {
      DecayFit fit = fit_decay(total);
      return {std::move(total), fit, t_end};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HorizonTooShort || attempt >= 6) throw;
    }
    t_end *= 2.0;
  }
}

CsvTable plateau_table(const std::vector<std::pair<std::string, PlateauSet>>& sets,
                       std::vector<std::string> key_header,
                       const std::vector<std::vector<double>>& keys) {
  CsvTable table;
  table.header = std::move(key_header);
  for (const char* h : {"t_begin", "t_end", "width", "mean_level"}) table.header.push_back(h);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (const auto& p : sets[s].second.intervals) {
      std::vector<double> row = keys[s];
      row.insert(row.end(), {p.t_begin, p.t_end, p.width(), p.mean_level});
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

CsvTable population_table(const Trajectory& tr) {
  CsvTable table;
  table.header.push_back("t");
  for (int mu = 1; mu <= tr.n_atoms(); ++mu) table.header.push_back("P_" + std::to_string(mu));
  table.header.push_back("P_tot");
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto kk = static_cast<int>(k);
    const Eigen::VectorXd p = tr.populations(kk);
    std::vector<double> row{tr.grid().time(kk)};
    for (Eigen::Index mu = 0; mu < p.size(); ++mu) row.push_back(p[mu]);
    row.push_back(p.sum());
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Nearest- and next-nearest-neighbour correlations C_{mu,mu+1}, C_{mu,mu+2}.
CsvTable correlation_table(const Trajectory& tr) {
  CsvTable table;
  table.header.push_back("t");
  std::vector<std::pair<int, int>> pairs;
  for (int gap = 1; gap <= 2; ++gap) {
    for (int mu = 0; mu + gap < tr.n_atoms(); ++mu) {
      pairs.emplace_back(mu, mu + gap);
      table.header.push_back("C_" + std::to_string(mu + 1) + "_" + std::to_string(mu + gap + 1));
    }
  }
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto kk = static_cast<int>(k);
    const CorrelationMatrix c = correlations(tr.amplitude(kk));
    std::vector<double> row{tr.grid().time(kk)};
    for (const auto& [a, b] : pairs) row.push_back(c(a, b));
    table.rows.push_back(std::move(row));
  }
  return table;
}

SvgPlot population_plot(const Trajectory& tr, const std::string& title) {
  SvgPlot plot{title, "gamma t", "population", false, 1e-6, {}};
  const std::vector<double> t = tr.grid().times();
  plot.curves.push_back({"P_tot", t, tr.total_population().value});
  for (int mu = 0; mu < tr.n_atoms() && mu < 7; ++mu) {
    plot.curves.push_back({"P_" + std::to_string(mu + 1), t, tr.atom_population(mu).value});
  }
  return plot;
}

std::string fit_summary(const DecayFit& fit) {
  std::ostringstream os;
  os << "Gamma_f=" << format_double(fit.gamma_f) << " +/- " << fit.ci95_half_width
     << " (window 0.." << fit.fit_window_end << ", " << fit.n_points << " pts)";
  return os.str();
}

void sweep_into(const RunConfig& c, const std::string& name, OutputSink& out) {
  CsvTable fits{{"N", "Ni", "gamma_f", "ci95", "window_end"}, {}};
  for (int ni : c.n_excited_list) {
    for (int n = ni; n <= c.n_max; ++n) {
      if (c.placement == Placement::Central && (n - ni) % 2 != 0) continue;
      RunConfig point = c;
      point.n_atoms = n;
      point.n_excited = ni;
      const FittedRun run = fit_with_extension(point);
      fits.rows.push_back({static_cast<double>(n), static_cast<double>(ni), run.fit.gamma_f,
                           run.fit.ci95_half_width, run.fit.fit_window_end});
    }
  }
  out.csv(name, fits, std::to_string(fits.rows.size()) + " fits, " + scheme_name(c.gamma_left));
  if (out.svg_enabled()) {
    SvgPlot plot{"Gamma_f vs N", "N", "Gamma_f / gamma", false, 1e-6, {}};
    for (int ni : c.n_excited_list) {
      SvgCurve curve{"Ni=" + std::to_string(ni), {}, {}};
      for (const auto& row : fits.rows) {
        if (static_cast<int>(row[1]) == ni) {
          curve.x.push_back(row[0]);
          curve.y.push_back(row[2]);
        }
      }
      if (!curve.x.empty()) plot.curves.push_back(std::move(curve));
    }
    const auto stem = std::filesystem::path(name).replace_extension(".svg").string();
    out.svg(stem, plot);
  }
}

// P_tot(t) for several Ni on the same chain, plus their plateaus.
void totals_into(const RunConfig& c, const std::vector<int>& ni_values, const std::string& stem,
                 OutputSink& out) {
  const TimeGrid grid(c.t_end, c.dt);
  CsvTable table{{"t"}, {}};
  std::vector<std::vector<double>> columns;
  std::vector<std::pair<std::string, PlateauSet>> plateaus;
  std::vector<std::vector<double>> keys;
  SvgPlot plot{"P_tot, " + scheme_name(c.gamma_left) + " N=" + std::to_string(c.n_atoms),
               "gamma t", "P_tot", true, 1e-6, {}};
  for (int ni : ni_values) {
    RunConfig point = c;
    point.n_excited = ni;
    const CouplingMatrix v = build_coupling_matrix(geometry_of(point), point.rates());
    const TimeSeries total{grid.times(),
                           evolve_total_population(v, build_initial_state(point.pattern(), c.n_atoms),
                                                   grid)};
    table.header.push_back("P_tot_Ni" + std::to_string(ni));
    columns.push_back(total.value);
    plateaus.emplace_back("Ni" + std::to_string(ni),
                          detect_plateaus(total, c.plateau_eps, c.plateau_min_width));
    keys.push_back({static_cast<double>(ni)});
    plot.curves.push_back({"Ni=" + std::to_string(ni), total.t, total.value});
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> row{grid.time(static_cast<int>(k))};
    for (const auto& col : columns) row.push_back(col[k]);
    table.rows.push_back(std::move(row));
  }
  out.csv(stem + "_ptot.csv", table, describe(c) + ", " + std::to_string(grid.size()) + " samples");
  const CsvTable plateau_rows = plateau_table(plateaus, {"Ni"}, keys);
  if (plateau_rows.rows.empty()) {
    out.note(stem + ": no plateaus detected");
  } else {
    out.csv(stem + "_plateaus.csv", plateau_rows,
            std::to_string(plateau_rows.rows.size()) + " plateaus");
  }
  if (out.svg_enabled()) out.svg(stem + "_ptot.svg", plot);
}

void ensemble_into(const RunConfig& c, const std::string& stem, OutputSink& out,
                   RunManifest& manifest) {
  EnsembleConfig e;
  e.n_atoms = c.n_atoms;
  e.spacing = c.spacing;
  e.rates = c.rates();
  e.pattern = c.pattern();
  e.grid = TimeGrid(c.t_end, c.dt);
  e.fluctuation = c.fluctuation;
  e.law = c.law;
  e.batch_size = c.batch_size;
  e.max_realizations = c.max_realizations;
  e.convergence_tol = c.convergence_tol;
  e.master_seed = c.seed;
  e.workers = manifest.workers;
  const EnsembleResult result = run_ensemble(e);

  CsvTable table{{"t", "mean", "std", "n"}, {}};
  for (std::size_t k = 0; k < result.stats.t.size(); ++k) {
    table.rows.push_back({result.stats.t[k], result.stats.mean[k], result.stats.stddev[k],
                          static_cast<double>(result.stats.count)});
  }
  std::ostringstream summary;
  summary << describe(c) << ", " << result.realizations_used << " realizations, "
          << (result.converged ? "converged" : "not converged");
  out.csv(stem + ".csv", table, summary.str());

  const TimeSeries mean{result.stats.t, result.stats.mean};
  const PlateauSet plateaus = detect_plateaus(mean, c.plateau_eps, c.plateau_min_width);
  const CsvTable plateau_rows = plateau_table({{"mean", plateaus}}, {}, {{}});
  if (plateau_rows.rows.empty()) {
    out.note(stem + ": no plateaus in the ensemble mean");
  } else {
    out.csv(stem + "_plateaus.csv", plateau_rows,
            std::to_string(plateau_rows.rows.size()) + " plateaus in the mean");
  }
  try {
    out.note(stem + ": mean " + fit_summary(fit_decay(mean)));
  } catch (const Error& err) {
    if (err.code() != ErrorCode::HorizonTooShort) throw;
    out.note(stem + ": mean not fitted, " + err.what());
  }

  json record;
  record["label"] = stem;
  record["realizations_used"] = result.realizations_used;
  record["converged"] = result.converged;
  record["batch_deltas"] = result.batch_deltas;
  record["batch_size"] = c.batch_size;
  record["max_realizations"] = c.max_realizations;
  record["convergence_tol"] = c.convergence_tol;
  manifest.convergence.push_back(record);

  if (out.svg_enabled()) {
    std::vector<double> upper(mean.size());
    std::vector<double> lower(mean.size());
    for (std::size_t k = 0; k < mean.size(); ++k) {
      upper[k] = result.stats.mean[k] + result.stats.stddev[k];
      lower[k] = result.stats.mean[k] - result.stats.stddev[k];
    }
    SvgPlot plot{"ensemble P_tot, " + describe(c), "gamma t", "P_tot", false, 1e-6,
                 {{"mean", mean.t, mean.value},
                  {"mean+1sd", mean.t, upper},
                  {"mean-1sd", mean.t, lower}}};
    out.svg(stem + ".svg", plot);
  }
}

}  // namespace

Preset parse_preset(std::string_view name) {
  if (name == "fig2") return Preset::Fig2;
  if (name == "fig3") return Preset::Fig3;
  if (name == "fig4") return Preset::Fig4;
  if (name == "fig5") return Preset::Fig5;
  if (name == "fig6") return Preset::Fig6;
  if (name == "custom") return Preset::Custom;
  throw Error(ErrorCode::InvalidArgument,
              "unknown preset '" + std::string(name) + "' (fig2..fig6, custom)");
}

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::Fig2: return "fig2";
    case Preset::Fig3: return "fig3";
    case Preset::Fig4: return "fig4";
    case Preset::Fig5: return "fig5";
    case Preset::Fig6: return "fig6";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

json RunManifest::to_json() const {
  json j;
  j["manifest_version"] = 1;
  j["tool"] = "chiral_sim";
  j["tool_version"] = std::string(kToolVersion);
  j["command"] = command;
  if (!preset.empty()) j["preset"] = preset;
  j["config"] = chiral::to_json(config);
  if (t_end_override) j["t_end_override"] = *t_end_override;
  j["master_seed"] = config.seed;
  j["rate_unit"] = "gamma_R (gamma_L when gamma_R = 0)";
  j["time_unit"] = "1/gamma";
  j["workers"] = workers;
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["convergence"] = convergence;
  j["outputs"] = outputs;
  return j;
}

OutputSink::OutputSink(std::filesystem::path root, bool svg, std::ostream& log)
    : root_(std::move(root)), svg_(svg), log_(log) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) {
    throw Error(ErrorCode::Io, "cannot create output directory '" + root_.string() + "': " +
                                   ec.message());
  }
}

void OutputSink::csv(const std::string& name, const CsvTable& table, const std::string& summary) {
  const auto path = root_ / name;
  std::filesystem::create_directories(path.parent_path());
  write_csv(table, path);
  files_.push_back(name);
  log_ << "wrote " << path.string() << " (" << table.rows.size() << " rows): " << summary << '\n';
}

void OutputSink::svg(const std::string& name, const SvgPlot& plot) {
  const auto path = root_ / name;
  std::filesystem::create_directories(path.parent_path());
  write_svg(plot, path);
  files_.push_back(name);
  log_ << "wrote " << path.string() << ": " << plot.title << '\n';
}

void OutputSink::note(const std::string& line) { log_ << line << '\n'; }

void run_simulate(const RunConfig& c, OutputSink& out, RunManifest& manifest) {
  manifest.config = c;
  const ChainGeometry geometry = geometry_of(c);
  const ChiralRates rates = c.rates();
  const CouplingMatrix v = build_coupling_matrix(geometry, rates);
  const Trajectory tr = evolve(v, build_initial_state(c.pattern(), c.n_atoms), TimeGrid(c.t_end, c.dt));

  out.csv("trajectory.csv", population_table(tr), describe(c));

  CsvTable rate_rows{{"t", "R_L", "R_R"}, {}};
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto kk = static_cast<int>(k);
    const ChannelRates r = channel_rates(tr.amplitude(kk), geometry, rates);
    rate_rows.rows.push_back({tr.grid().time(kk), r.left, r.right});
  }
  out.csv("rates.csv", rate_rows, "guided emission rates into each channel");
  if (c.n_atoms >= 2) {
    out.csv("correlations.csv", correlation_table(tr), "nearest and next-nearest neighbour C");
  }

  const TimeSeries total = tr.total_population();
  const PlateauSet plateaus = detect_plateaus(total, c.plateau_eps, c.plateau_min_width);
  const CsvTable plateau_rows = plateau_table({{"P_tot", plateaus}}, {}, {{}});
  if (plateau_rows.rows.empty()) {
    out.note("no plateaus detected (eps=" + format_double(c.plateau_eps) +
             ", min_width=" + format_double(c.plateau_min_width) + ")");
  } else {
    out.csv("plateaus.csv", plateau_rows, std::to_string(plateau_rows.rows.size()) + " plateaus");
  }
  try {
    const DecayFit fit = fit_decay(total);
    out.csv("fit.csv",
            {{"N", "Ni", "gamma_f", "ci95", "window_end"},
             {{static_cast<double>(c.n_atoms), static_cast<double>(c.n_excited), fit.gamma_f,
               fit.ci95_half_width, fit.fit_window_end}}},
            fit_summary(fit));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::HorizonTooShort) throw;
    out.note(std::string("fit skipped: ") + e.what());
  }
  if (out.svg_enabled()) out.svg("trajectory.svg", population_plot(tr, describe(c)));
}

void run_sweep(const RunConfig& c, OutputSink& out, RunManifest& manifest) {
  manifest.config = c;
  sweep_into(c, "fits.csv", out);
}

void run_disorder(const RunConfig& c, OutputSink& out, RunManifest& manifest) {
  manifest.config = c;
  ensemble_into(c, "ensemble", out, manifest);
}

void run_spectrum(const RunConfig& c, OutputSink& out, RunManifest& manifest) {
  manifest.config = c;
  const CouplingMatrix v = build_coupling_matrix(geometry_of(c), c.rates());
  const SpectralReport report = defectiveness(v);
  CsvTable values{{"index", "re", "im"}, {}};
  Complex sum = 0.0;
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    values.rows.push_back({static_cast<double>(i), report.eigenvalues[i].real(),
                           report.eigenvalues[i].imag()});
    sum += report.eigenvalues[i];
  }
  out.csv("eigenvalues.csv", values, describe(c));
  const double trace_error = std::abs(sum - v.entries.trace());
  CsvTable summary{{"N", "defective", "min_singular_value", "tolerance", "non_normality",
                    "trace_error", "directionality"},
                   {{static_cast<double>(c.n_atoms), report.defective ? 1.0 : 0.0,
                     report.min_singular_value, report.tolerance, non_normality(v), trace_error,
                     directionality(c.rates())}}};
  out.csv("spectral_report.csv", summary,
          std::string(report.defective ? "defective" : "diagonalizable") +
              ", min singular value " + format_double(report.min_singular_value));
}

void run_experiment(Preset preset, const RunConfig& base, std::optional<double> t_end_override,
                    OutputSink& out, RunManifest& manifest) {
  manifest.preset = std::string(to_string(preset));
  manifest.config = base;
  manifest.t_end_override = t_end_override;
  RunConfig c = base;
  auto physics = [&](double gamma_left, double default_end) {
    c.gamma_left = gamma_left;
    c.gamma_right = 1.0;
    c.spacing = std::numbers::pi;
    c.spacing_text = "pi";
    c.fluctuation = 0.0;
    c.placement = Placement::End;
    c.t_end = t_end_override.value_or(default_end);
  };

  switch (preset) {
    case Preset::Fig2:
    case Preset::Fig3: {
      physics(preset == Preset::Fig2 ? 0.0 : 0.5, default_t_end(preset == Preset::Fig2 ? 0.0 : 0.5));
      c.n_excited_list = {1, 2, 3};
      c.n_max = 20;
      sweep_into(c, "fits.csv", out);
      c.n_atoms = 12;
      totals_into(c, {1, 2, 3}, "N12", out);
      break;
    }
    case Preset::Fig4: {
      for (double gl : {0.0, 0.5}) {
        physics(gl, gl == 0.0 ? 100.0 : 200.0);
        c.n_atoms = 6;
        c.n_excited = 1;
        const std::string stem = scheme_name(gl);
        const Trajectory tr = evolve(build_coupling_matrix(geometry_of(c), c.rates()),
                                     build_initial_state(c.pattern(), c.n_atoms),
                                     TimeGrid(c.t_end, c.dt));
        out.csv(stem + "_populations.csv", population_table(tr), describe(c));
        out.csv(stem + "_correlations.csv", correlation_table(tr), describe(c));
        if (out.svg_enabled()) out.svg(stem + "_populations.svg", population_plot(tr, describe(c)));
      }
      break;
    }
    case Preset::Fig5: {
      physics(0.5, 500.0);
      c.placement = Placement::Central;
      c.n_excited_list = {1, 3, 5};
      c.n_max = 21;
      RunConfig sweep = c;
      // Odd N >= Ni + 2 keeps atoms on both flanks.
      CsvTable fits{{"N", "Ni", "gamma_f", "ci95", "window_end"}, {}};
      for (int ni : c.n_excited_list) {
        for (int n = ni + 2; n <= c.n_max; n += 2) {
          sweep.n_atoms = n;
          sweep.n_excited = ni;
          const FittedRun run = fit_with_extension(sweep);
          fits.rows.push_back({static_cast<double>(n), static_cast<double>(ni), run.fit.gamma_f,
                               run.fit.ci95_half_width, run.fit.fit_window_end});
        }
      }
      out.csv("fits.csv", fits, std::to_string(fits.rows.size()) + " fits, central excitation");
      c.n_atoms = 11;
      totals_into(c, {1, 3, 5}, "N11", out);
      break;
    }
    case Preset::Fig6: {
      for (const auto& [gl, f] : {std::pair{0.0, 0.2}, std::pair{0.5, 0.02}}) {
        for (int ni : {2, 3}) {
          physics(gl, default_t_end(gl));
          c.fluctuation = f;
          c.n_atoms = 12;
          c.n_excited = ni;
          ensemble_into(c, scheme_name(gl) + "_Ni" + std::to_string(ni), out, manifest);
        }
      }
      break;
    }
    case Preset::Custom:
      run_simulate(base, out, manifest);
      manifest.preset = "custom";
      break;
  }
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << manifest.to_json().dump(2) << '\n';
}

}  // namespace chiral
