#pragma once

#include <complex>
#include <span>
#include <vector>

namespace chiral {

/// Coefficients in ascending order: c[0] + c[1] t + c[2] t^2 + ...
using ComplexPolynomial = std::vector<std::complex<double>>;

std::complex<double> evaluate(std::span<const std::complex<double>> coefficients,
                              std::complex<double> t);

/// Antiderivative vanishing at t = 0.
ComplexPolynomial integrate(std::span<const std::complex<double>> coefficients);

/// Index of the highest non-zero coefficient; -1 for the zero polynomial.
int degree(std::span<const std::complex<double>> coefficients);

/// All roots of a real polynomial via the eigenvalues of its companion
/// matrix, each refined by Newton steps until |p(r)| <= residual_tol (scaled
/// by the coefficient magnitudes) or no further progress.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coefficients,
                                                   double residual_tol = 1e-10);

}  // namespace chiral
