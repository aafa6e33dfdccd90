#include "chiral/analysis.hpp"

#include "chiral/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chiral {

namespace {

void check_series(const TimeSeries& s) {
  if (s.t.size() != s.value.size()) {
    throw Error(ErrorCode::DimensionMismatch, "time and value columns differ in length");
  }
  if (s.t.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "series needs at least two samples");
  }
}

struct Residual {
  double sum_squares = 0.0;
  double jacobian_norm2 = 0.0;  // sum (d model / d gamma)^2
  double gradient = 0.0;        // sum jacobian * residual
};

Residual evaluate_fit(std::span<const double> tau, std::span<const double> y, double gamma) {
  Residual r;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double model = std::exp(-gamma * tau[i]);
    const double diff = y[i] - model;
    const double jac = -tau[i] * model;
    r.sum_squares += diff * diff;
    r.jacobian_norm2 += jac * jac;
    r.gradient += jac * diff;
  }
  return r;
}

// Minus the OLS slope of ln y against tau; starting point for the nonlinear fit.
double log_linear_rate(std::span<const double> tau, std::span<const double> y) {
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (y[i] < 1e-12) continue;
    const double l = std::log(y[i]);
    st += tau[i];
    sl += l;
    stt += tau[i] * tau[i];
    stl += tau[i] * l;
    ++n;
  }
  const double denom = n * stt - st * st;
  if (n < 2 || denom <= 0.0) return 0.0;
  return -(n * stl - st * sl) / denom;
}

}  // namespace

DecayFit fit_decay(const TimeSeries& series) {
  check_series(series);
  const double p0 = series.value.front();
  if (!(p0 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "initial population must be positive");
  }
  const auto hit = std::find_if(series.value.begin(), series.value.end(),
                                [&](double p) { return p <= kFitThreshold * p0; });
  if (hit == series.value.end()) {
    const double t_last = series.t.back() - series.t.front();
    const double ratio = series.value.back() / p0;
    std::ostringstream msg;
    msg << "horizon too short: P_tot fell to " << ratio << " of its initial value by t="
        << series.t.back() << ", fit needs " << kFitThreshold;
    if (ratio > 0.0 && ratio < 1.0) {
      msg << "; extend t_end to at least ~"
          << series.t.front() + t_last * std::log(kFitThreshold) / std::log(ratio);
    }
    throw Error(ErrorCode::HorizonTooShort, msg.str());
  }
  return fit_decay(series, series.t[static_cast<std::size_t>(hit - series.value.begin())]);
}

DecayFit fit_decay(const TimeSeries& series, double window_end) {
  check_series(series);
  const double p0 = series.value.front();
  if (!(p0 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "initial population must be positive");
  }
  const double t0 = series.t.front();
  std::vector<double> tau;
  std::vector<double> y;
  for (std::size_t i = 0; i < series.size() && series.t[i] <= window_end; ++i) {
    tau.push_back(series.t[i] - t0);
    y.push_back(series.value[i] / p0);
  }
  if (tau.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "fit window holds fewer than two samples");
  }

  double gamma = log_linear_rate(tau, y);
  if (!(gamma > 0.0)) gamma = 1.0 / std::max(tau.back(), 1e-12);
  Residual current = evaluate_fit(tau, y, gamma);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    if (current.jacobian_norm2 == 0.0) break;
    // Gauss-Newton on the single parameter, model derivative is -tau e^{-gamma tau}.
    double step = current.gradient / current.jacobian_norm2;
    if (std::abs(step) <= 1e-13 * std::abs(gamma)) {
      converged = true;
      break;
    }
    bool improved = false;
    for (int halving = 0; halving < 60; ++halving) {
      const double candidate = gamma + step;
      if (candidate > 0.0) {
        const Residual trial = evaluate_fit(tau, y, candidate);
        if (trial.sum_squares < current.sum_squares) {
          gamma = candidate;
          current = trial;
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) {
      converged = true;  // no descent left along the Gauss-Newton direction
      break;
    }
  }
  if (!converged || !std::isfinite(gamma) || !(gamma > 0.0)) {
    throw Error(ErrorCode::NotConverged, "exponential fit did not converge");
  }

  DecayFit fit;
  fit.gamma_f = gamma;
  fit.fit_window_end = tau.back() + t0;
  fit.n_points = static_cast<int>(tau.size());
  const double dof = static_cast<double>(tau.size() - 1);
  const double variance = current.sum_squares / dof;
  fit.ci95_half_width = 1.96 * std::sqrt(variance / current.jacobian_norm2);
  return fit;
}

bool PlateauSet::any_intersecting(double t_a, double t_b) const {
  return std::any_of(intervals.begin(), intervals.end(), [&](const Plateau& p) {
    return p.t_begin <= t_b && p.t_end >= t_a;
  });
}

bool PlateauSet::any_ending_by(double t) const {
  return std::any_of(intervals.begin(), intervals.end(),
                     [&](const Plateau& p) { return p.t_end <= t; });
}

PlateauSet detect_plateaus(const TimeSeries& series, double eps_slope, double min_width) {
  check_series(series);
  if (!(eps_slope > 0.0) || !(min_width >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "plateau thresholds must be positive");
  }
  const std::size_t n = series.size();
  std::vector<double> log_p(n);
  std::vector<bool> valid(n);
  for (std::size_t k = 0; k < n; ++k) {
    valid[k] = series.value[k] > 0.0;
    log_p[k] = valid[k] ? std::log(series.value[k]) : 0.0;
  }
  std::vector<bool> flat(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? k : k + 1;
    if (!valid[lo] || !valid[hi]) continue;
    const double slope = (log_p[hi] - log_p[lo]) / (series.t[hi] - series.t[lo]);
    flat[k] = std::abs(slope) < eps_slope;
  }

  PlateauSet set{{}, eps_slope, min_width};
  std::size_t k = 0;
  while (k < n) {
    if (!flat[k]) {
      ++k;
      continue;
    }
    std::size_t last = k;
    double level = series.value[k];
    while (last + 1 < n && flat[last + 1]) {
      ++last;
      level += series.value[last];
    }
    const double width = series.t[last] - series.t[k];
    if (width >= min_width) {
      set.intervals.push_back(
          {series.t[k], series.t[last], level / static_cast<double>(last - k + 1)});
    }
    k = last + 1;
  }
  return set;
}

RunningStats::RunningStats(std::vector<double> t)
    : t_(std::move(t)), mean_(t_.size(), 0.0), m2_(t_.size(), 0.0) {}

void RunningStats::add(std::span<const double> values) {
  if (values.size() != mean_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "ensemble member on a different grid");
  }
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double delta = values[k] - mean_[k];
    mean_[k] += delta / n;
    m2_[k] += delta * (values[k] - mean_[k]);
  }
}

std::vector<double> RunningStats::stddev() const {
  std::vector<double> s(m2_.size(), 0.0);
  if (count_ < 2) return s;
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = std::sqrt(std::max(0.0, m2_[k]) / static_cast<double>(count_ - 1));
  }
  return s;
}

EnsembleSeries RunningStats::snapshot() const {
  return {t_, mean_, stddev(), count_};
}

EnsembleSeries ensemble_stats(std::span<const TimeSeries> series) {
  if (series.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "standard deviation needs at least two series");
  }
  RunningStats stats(series.front().t);
  for (const auto& s : series) {
    if (s.t != series.front().t) {
      throw Error(ErrorCode::DimensionMismatch, "ensemble members use different grids");
    }
    stats.add(s.value);
  }
  return stats.snapshot();
}

EnsembleSeries ensemble_stats(std::span<const Trajectory> trajectories) {
  std::vector<TimeSeries> totals;
  totals.reserve(trajectories.size());
  for (const auto& tr : trajectories) totals.push_back(tr.total_population());
  return ensemble_stats(std::span<const TimeSeries>(totals));
}

}  // namespace chiral
