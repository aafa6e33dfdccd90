#include "chiral/dynamics.hpp"

#include "chiral/error.hpp"
#include "chiral/matrix_exponential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chiral {

TimeGrid::TimeGrid(double t_end, double dt) : t_end_(t_end), dt_(dt), steps_(0) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::InvalidArgument, "end time must be positive");
  }
  const double ratio = t_end / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
    throw Error(ErrorCode::InvalidArgument,
                "t_end/dt must be a positive integer (got " + std::to_string(ratio) + ")");
  }
  if (rounded > 1e8) {
    throw Error(ErrorCode::InvalidArgument, "grid exceeds 1e8 steps");
  }
  steps_ = static_cast<int>(rounded);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> t(size());
  for (int k = 0; k <= steps_; ++k) t[k] = time(k);
  return t;
}

Trajectory::Trajectory(TimeGrid grid, Eigen::MatrixXcd amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.cols()) != grid_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "trajectory columns do not match grid");
  }
}

TimeSeries Trajectory::atom_population(int mu) const {
  if (mu < 0 || mu >= n_atoms()) {
    throw Error(ErrorCode::InvalidArgument, "atom index out of range");
  }
  TimeSeries s{grid_.times(), std::vector<double>(size())};
  for (std::size_t k = 0; k < size(); ++k) {
    s.value[k] = std::norm(amplitudes_(mu, static_cast<Eigen::Index>(k)));
  }
  return s;
}

TimeSeries Trajectory::total_population() const {
  TimeSeries s{grid_.times(), std::vector<double>(size())};
  for (std::size_t k = 0; k < size(); ++k) {
    s.value[k] = amplitudes_.col(static_cast<Eigen::Index>(k)).squaredNorm();
  }
  return s;
}

Eigen::MatrixXcd step_propagator(const CouplingMatrix& v, double dt) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "propagator step must be non-negative");
  }
  const auto n = v.entries.rows();
  if (dt == 0.0) return Eigen::MatrixXcd::Identity(n, n);
  return matrix_exponential(v.entries * dt);
}

namespace {

void check_initial(const CouplingMatrix& v, const Eigen::VectorXcd& initial) {
  if (initial.size() != v.entries.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "initial state has " + std::to_string(initial.size()) +
                    " entries, coupling matrix is " + std::to_string(v.entries.rows()) +
                    "x" + std::to_string(v.entries.cols()));
  }
  if (std::abs(initial.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "initial state must be normalized");
  }
}

}  // namespace

Trajectory evolve(const CouplingMatrix& v, const Eigen::VectorXcd& initial,
                  const TimeGrid& grid) {
  check_initial(v, initial);
  const Eigen::MatrixXcd step = step_propagator(v, grid.dt());
  Eigen::MatrixXcd amplitudes(initial.size(), static_cast<Eigen::Index>(grid.size()));
  amplitudes.col(0) = initial;
  for (int k = 0; k < grid.steps(); ++k) {
    amplitudes.col(k + 1).noalias() = step * amplitudes.col(k);
  }
  return Trajectory(grid, std::move(amplitudes));
}

std::vector<double> evolve_total_population(const CouplingMatrix& v,
                                            const Eigen::VectorXcd& initial,
                                            const TimeGrid& grid) {
  check_initial(v, initial);
  const Eigen::MatrixXcd step = step_propagator(v, grid.dt());
  std::vector<double> total(grid.size());
  Eigen::VectorXcd current = initial;
  Eigen::VectorXcd next(initial.size());
  total[0] = current.squaredNorm();
  for (int k = 0; k < grid.steps(); ++k) {
    next.noalias() = step * current;
    current.swap(next);
    total[k + 1] = current.squaredNorm();
  }
  return total;
}

double propagation_residual(const CouplingMatrix& v, const Trajectory& trajectory,
                            std::span<const int> indices) {
  const Eigen::VectorXcd initial = trajectory.amplitude(0);
  double worst = 0.0;
  for (int k : indices) {
    if (k < 0 || static_cast<std::size_t>(k) >= trajectory.size()) {
      throw Error(ErrorCode::InvalidArgument, "spot-check index outside trajectory");
    }
    const Eigen::VectorXcd reference =
        matrix_exponential(v.entries * trajectory.grid().time(k)) * initial;
    worst = std::max(worst, (trajectory.amplitude(k) - reference).norm());
  }
  return worst;
}

CorrelationMatrix correlations(const Eigen::VectorXcd& amplitudes) {
  const auto n = amplitudes.size();
  CorrelationMatrix c(n, n);
  for (Eigen::Index mu = 0; mu < n; ++mu) {
    for (Eigen::Index nu = 0; nu < n; ++nu) {
      c(mu, nu) = std::norm(std::conj(amplitudes[mu]) * amplitudes[nu]);
    }
  }
  return c;
}

ChannelRates channel_rates(const Eigen::VectorXcd& amplitudes,
                           const ChainGeometry& geometry, const ChiralRates& rates) {
  if (amplitudes.size() != geometry.n_atoms()) {
    throw Error(ErrorCode::DimensionMismatch, "amplitudes do not match geometry");
  }
  Complex toward_left = 0.0;
  Complex toward_right = 0.0;
  const auto& phi = geometry.phases();
  for (int mu = 0; mu < geometry.n_atoms(); ++mu) {
    toward_left += std::polar(1.0, -phi[mu]) * amplitudes[mu];
    toward_right += std::polar(1.0, phi[mu]) * amplitudes[mu];
  }
  return {rates.gamma_left() * std::norm(toward_left),
          rates.gamma_right() * std::norm(toward_right)};
}

Complex CascadedPolynomial::amplitude(double t) const {
  return evaluate(coefficients, t) * std::exp(-0.5 * t) *
         std::polar(1.0, -(atom - 1) * spacing);
}

std::vector<CascadedPolynomial> cascaded_oracle_chain(int n_atoms, int n_excited,
                                                      double spacing) {
  if (n_atoms < 1 || n_excited < 1 || n_excited > n_atoms) {
    throw Error(ErrorCode::InvalidArgument, "oracle needs 1 <= Ni <= N");
  }
  std::vector<CascadedPolynomial> chain;
  chain.reserve(static_cast<std::size_t>(n_atoms));
  ComplexPolynomial running_sum;  // sum of p_{m'} for m' < m
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_excited));
  for (int m = 1; m <= n_atoms; ++m) {
    ComplexPolynomial p = integrate(running_sum);
    for (auto& c : p) c = -c;
    if (p.empty()) p.push_back(0.0);
    if (m <= n_excited) p[0] += norm * std::polar(1.0, (m - 1) * spacing);

    if (running_sum.size() < p.size()) running_sum.resize(p.size(), 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) running_sum[k] += p[k];

    chain.push_back({m, n_excited, spacing, std::move(p)});
  }
  return chain;
}

CascadedPolynomial cascaded_oracle(int n_atoms, int n_excited, double spacing, int atom) {
  if (atom < 1 || atom > n_atoms) {
    throw Error(ErrorCode::InvalidArgument,
                "atom index " + std::to_string(atom) + " outside chain of " +
                    std::to_string(n_atoms));
  }
  return std::move(cascaded_oracle_chain(n_atoms, n_excited, spacing)[atom - 1]);
}

std::vector<double> zero_crossings(const CascadedPolynomial& p) {
  double scale = 0.0;
  for (const auto& c : p.coefficients) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};

  std::vector<double> real(p.coefficients.size());
  for (std::size_t k = 0; k < real.size(); ++k) {
    const Complex c = p.coefficients[k];
    if (std::abs(c.imag()) > 1e-12 * scale) {
      throw Error(ErrorCode::InvalidArgument,
                  "zero crossings need real coefficients (Ni = 1 or xi a multiple of pi)");
    }
    real[k] = std::abs(c.real()) <= 1e-13 * scale ? 0.0 : c.real();
  }
  // Remove the root at t = 0.
  std::size_t lowest = 0;
  while (lowest < real.size() && real[lowest] == 0.0) ++lowest;
  const std::span<const double> reduced(real.data() + lowest, real.size() - lowest);

  std::vector<double> zeros;
  for (const auto& r : polynomial_roots(reduced)) {
    if (std::abs(r.imag()) < 1e-8 && r.real() > 0.0) zeros.push_back(r.real());
  }
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

}  // namespace chiral
