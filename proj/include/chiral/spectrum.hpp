#pragma once

#include "chiral/chain_model.hpp"

#include <vector>

namespace chiral {

struct SpectralReport {
  std::vector<Complex> eigenvalues;  // ascending real part
  double min_singular_value = 0.0;   // of the unit-column eigenvector matrix
  double tolerance = 0.0;
  bool defective = false;
};

/// Eigenvalues of V sorted by real part (then imaginary part). Triangular V
/// returns its diagonal exactly.
std::vector<Complex> eigenvalues(const CouplingMatrix& v);

/// Numerical defectiveness: the eigenvector matrix (columns normalized) has
/// smallest singular value below tol. tol <= 0 selects 1e-8 * N.
SpectralReport defectiveness(const CouplingMatrix& v, double tol = 0.0);

/// Frobenius norm of the commutator V V^dagger - V^dagger V.
double non_normality(const CouplingMatrix& v);

}  // namespace chiral
