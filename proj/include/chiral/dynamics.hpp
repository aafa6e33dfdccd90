#pragma once

#include "chiral/chain_model.hpp"
#include "chiral/polynomial.hpp"
#include "chiral/series.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace chiral {

/// Uniform grid t_k = k*dt, k = 0..steps, starting at zero.
class TimeGrid {
public:
  /// Requires t_end/dt to be an integer (to 1e-9 relative) and >= 1.
  TimeGrid(double t_end, double dt);

  double t_end() const noexcept { return t_end_; }
  double dt() const noexcept { return dt_; }
  int steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(steps_) + 1; }
  double time(int k) const noexcept { return k * dt_; }
  std::vector<double> times() const;

private:
  double t_end_;
  double dt_;
  int steps_;
};

/// Amplitudes A_mu(t_k) stored column-wise, one column per grid point.
class Trajectory {
public:
  Trajectory(TimeGrid grid, Eigen::MatrixXcd amplitudes);

  const TimeGrid& grid() const noexcept { return grid_; }
  int n_atoms() const noexcept { return static_cast<int>(amplitudes_.rows()); }
  std::size_t size() const noexcept { return grid_.size(); }

  const Eigen::MatrixXcd& amplitudes() const noexcept { return amplitudes_; }
  Eigen::VectorXcd amplitude(int k) const { return amplitudes_.col(k); }
  Eigen::VectorXd populations(int k) const { return amplitudes_.col(k).cwiseAbs2(); }

  /// P_mu(t) for one atom (zero-based index).
  TimeSeries atom_population(int mu) const;
  /// P_tot(t) = sum_mu |A_mu(t)|^2.
  TimeSeries total_population() const;

private:
  TimeGrid grid_;
  Eigen::MatrixXcd amplitudes_;
};

/// C(mu,nu) = |A_mu^* A_nu|^2 for a single-excitation pure state.
using CorrelationMatrix = Eigen::MatrixXd;

struct ChannelRates {
  double left = 0.0;
  double right = 0.0;
  double total() const noexcept { return left + right; }
};

/// exp(V dt); dt = 0 gives the identity.
Eigen::MatrixXcd step_propagator(const CouplingMatrix& v, double dt);

/// A(t_{k+1}) = exp(V dt) A(t_k) with the propagator computed once.
Trajectory evolve(const CouplingMatrix& v, const Eigen::VectorXcd& initial,
                  const TimeGrid& grid);

/// Same propagation, keeping only P_tot(t_k). Used by ensembles.
std::vector<double> evolve_total_population(const CouplingMatrix& v,
                                            const Eigen::VectorXcd& initial,
                                            const TimeGrid& grid);

/// max_k |A(t_k) - exp(V t_k) A(0)| over the given grid indices, with the
/// reference exponential computed directly for each t_k.
double propagation_residual(const CouplingMatrix& v, const Trajectory& trajectory,
                            std::span<const int> indices);

CorrelationMatrix correlations(const Eigen::VectorXcd& amplitudes);

/// Emission into the two guided channels:
///   R_L = gL |sum_mu e^{-i phi_mu} A_mu|^2,  R_R = gR |sum_mu e^{+i phi_mu} A_mu|^2.
/// Their sum equals -dP_tot/dt.
ChannelRates channel_rates(const Eigen::VectorXcd& amplitudes,
                           const ChainGeometry& geometry, const ChiralRates& rates);

/// Exact solution of the cascaded chain (gL = 0, gR = 1) on an equidistant
/// lattice: A_m(t) = p_m(t) exp(-t/2) exp(-i (m-1) xi), with
/// p_m' = -sum_{m'<m} p_{m'} and p_m(0) = e^{i(m-1)xi}/sqrt(Ni) for m <= Ni.
struct CascadedPolynomial {
  int atom = 1;  // one-based index m
  int n_excited = 1;
  double spacing = 0.0;
  ComplexPolynomial coefficients;  // ascending powers of t

  int degree() const { return chiral::degree(coefficients); }
  Complex amplitude(double t) const;
};

CascadedPolynomial cascaded_oracle(int n_atoms, int n_excited, double spacing, int atom);

/// All atoms m = 1..N in one pass.
std::vector<CascadedPolynomial> cascaded_oracle_chain(int n_atoms, int n_excited,
                                                      double spacing);

/// Strictly positive real zeros of p_m, ascending. Requires real
/// coefficients (N_i = 1, or xi a multiple of pi).
std::vector<double> zero_crossings(const CascadedPolynomial& p);

}  // namespace chiral
