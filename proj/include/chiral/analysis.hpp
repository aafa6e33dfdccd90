#pragma once

#include "chiral/dynamics.hpp"
#include "chiral/series.hpp"

#include <span>
#include <vector>

namespace chiral {

/// Effective decay constant from a single-exponential fit of P_tot.
struct DecayFit {
  double gamma_f = 0.0;
  double ci95_half_width = 0.0;
  double fit_window_end = 0.0;
  int n_points = 0;
};

/// Fraction of the initial population at which the default window closes.
inline constexpr double kFitThreshold = 1e-3;

/// Least-squares fit of P_tot(t)/P_tot(t_0) to exp(-gamma_f (t - t_0)) over
/// [t_0, t_w], where t_w is the first sample with P_tot <= 1e-3 P_tot(t_0).
/// Throws HorizonTooShort if the series never gets there.
DecayFit fit_decay(const TimeSeries& series);

/// Same fit over an explicitly chosen window [t_0, window_end].
DecayFit fit_decay(const TimeSeries& series, double window_end);

struct Plateau {
  double t_begin = 0.0;
  double t_end = 0.0;
  double mean_level = 0.0;

  double width() const noexcept { return t_end - t_begin; }
};

struct PlateauSet {
  std::vector<Plateau> intervals;
  double eps_slope = 0.0;
  double min_width = 0.0;

  bool empty() const noexcept { return intervals.empty(); }
  bool any_intersecting(double t_a, double t_b) const;
  bool any_ending_by(double t) const;
};

inline constexpr double kDefaultPlateauSlope = 1e-3;
inline constexpr double kDefaultPlateauWidth = 5.0;

/// Maximal runs of grid points with |d ln P / dt| < eps_slope (centered
/// differences, one-sided at the ends) spanning at least min_width.
PlateauSet detect_plateaus(const TimeSeries& series,
                           double eps_slope = kDefaultPlateauSlope,
                           double min_width = kDefaultPlateauWidth);

struct EnsembleSeries {
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> stddev;  // sample, n - 1 normalization
  int count = 0;
};

/// Pointwise running mean and variance (Welford), accumulated in call order.
class RunningStats {
public:
  explicit RunningStats(std::vector<double> t);

  void add(std::span<const double> values);
  int count() const noexcept { return count_; }
  const std::vector<double>& mean() const noexcept { return mean_; }
  /// Sample standard deviation; zeros when fewer than two samples.
  std::vector<double> stddev() const;
  EnsembleSeries snapshot() const;

private:
  std::vector<double> t_;
  std::vector<double> mean_;
  std::vector<double> m2_;
  int count_ = 0;
};

/// Pointwise mean and 1-sigma band of P_tot. Needs >= 2 series on one grid.
EnsembleSeries ensemble_stats(std::span<const TimeSeries> series);
EnsembleSeries ensemble_stats(std::span<const Trajectory> trajectories);

}  // namespace chiral
