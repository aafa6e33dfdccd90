#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace chiral {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class FluctuationLaw { Uniform, Gaussian };

/// Atom positions of a 1D chain, stored as dimensionless phases k*x.
class ChainGeometry {
public:
  ChainGeometry(std::vector<double> phases, double nominal_spacing,
                double fluctuation_fraction);

  int n_atoms() const noexcept { return static_cast<int>(phases_.size()); }
  const std::vector<double>& phases() const noexcept { return phases_; }
  double nominal_spacing() const noexcept { return nominal_spacing_; }
  double fluctuation_fraction() const noexcept { return fluctuation_fraction_; }

private:
  std::vector<double> phases_;
  double nominal_spacing_;
  double fluctuation_fraction_;
};

/// Left/right guided decay rates in units of the reference rate.
class ChiralRates {
public:
  ChiralRates(double gamma_left, double gamma_right);

  double gamma_left() const noexcept { return gamma_left_; }
  double gamma_right() const noexcept { return gamma_right_; }
  double total() const noexcept { return gamma_left_ + gamma_right_; }
  bool cascaded() const noexcept { return gamma_left_ == 0.0; }
  /// Rate that sets the time unit: gamma_R, or gamma_L when gamma_R is zero.
  double reference() const noexcept {
    return gamma_right_ > 0.0 ? gamma_right_ : gamma_left_;
  }

private:
  double gamma_left_;
  double gamma_right_;
};

enum class Placement { End, Central };

class ExcitationPattern {
public:
  ExcitationPattern(int n_excited, Placement placement);

  int n_excited() const noexcept { return n_excited_; }
  Placement placement() const noexcept { return placement_; }
  /// Zero-based index of the first excited atom in a chain of n_atoms.
  int first_index(int n_atoms) const;

private:
  int n_excited_;
  Placement placement_;
};

enum class CouplingKind { Chiral, Reciprocal };

struct CouplingMatrix {
  ComplexMatrix entries;
  CouplingKind kind = CouplingKind::Chiral;

  int dimension() const noexcept { return static_cast<int>(entries.rows()); }
};

/// Lattice phases mu*xi (mu = 1..N) plus frozen random deviations drawn from
/// the given law with peak-to-peak width f*xi. Pure in (N, xi, f, seed, law).
ChainGeometry build_positions(int n_atoms, double spacing, double fluctuation,
                              std::uint64_t seed,
                              FluctuationLaw law = FluctuationLaw::Uniform);

/// Non-reciprocal single-excitation coupling:
///   V(mu,nu) = -gL exp(-i|phi_mu - phi_nu|)   mu < nu
///              -(gL + gR)/2                    mu = nu
///              -gR exp(-i|phi_mu - phi_nu|)   mu > nu
CouplingMatrix build_coupling_matrix(const ChainGeometry& geometry,
                                     const ChiralRates& rates);

/// Reciprocal kernel J(mu,nu) = gamma [cos(phi_mu - phi_nu) + i sin|phi_mu - phi_nu|].
/// Off the diagonal it relates to the chiral matrix with gL = gR = gamma by
/// V(mu,nu) = -conj(J(mu,nu)).
CouplingMatrix reciprocal_kernel(const ChainGeometry& geometry, double gamma);

/// D = (gR - gL) / (gR + gL).
double directionality(const ChiralRates& rates);

/// Uniform W state over the excited block, normalized to one.
ComplexVector build_initial_state(const ExcitationPattern& pattern, int n_atoms);

}  // namespace chiral
