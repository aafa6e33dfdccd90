#include "chiral/polynomial.hpp"

#include "chiral/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace chiral {

std::complex<double> evaluate(std::span<const std::complex<double>> coefficients,
                              std::complex<double> t) {
  std::complex<double> acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    acc = acc * t + *it;
  }
  return acc;
}

ComplexPolynomial integrate(std::span<const std::complex<double>> coefficients) {
  ComplexPolynomial out(coefficients.size() + 1, 0.0);
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    out[k + 1] = coefficients[k] / static_cast<double>(k + 1);
  }
  return out;
}

int degree(std::span<const std::complex<double>> coefficients) {
  for (int k = static_cast<int>(coefficients.size()) - 1; k >= 0; --k) {
    if (coefficients[k] != 0.0) return k;
  }
  return -1;
}

namespace {

double real_eval(std::span<const double> c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::complex<double> complex_eval(std::span<const double> c, std::complex<double> t) {
  std::complex<double> acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coefficients,
                                                   double residual_tol) {
  int n = static_cast<int>(coefficients.size()) - 1;
  while (n >= 0 && coefficients[n] == 0.0) --n;
  if (n < 0) {
    throw Error(ErrorCode::InvalidArgument, "roots of the zero polynomial are undefined");
  }
  if (n == 0) return {};

  const auto c = coefficients.first(static_cast<std::size_t>(n) + 1);
  std::vector<double> derivative(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) derivative[k - 1] = k * c[k];

  // Companion matrix of the monic polynomial, last column holds -c_k / c_n.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) companion(k, k - 1) = 1.0;
  for (int k = 0; k < n; ++k) companion(k, n - 1) = -c[k] / c[n];

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotConverged, "companion eigenvalue solver failed");
  }

  std::vector<std::complex<double>> roots;
  roots.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    std::complex<double> r = solver.eigenvalues()[k];
    // Newton until the residual stops shrinking.
    for (int it = 0; it < 50; ++it) {
      const std::complex<double> value = complex_eval(c, r);
      if (value == 0.0) break;
      const std::complex<double> slope = complex_eval(derivative, r);
      if (slope == 0.0) break;
      const std::complex<double> next = r - value / slope;
      if (std::abs(complex_eval(c, next)) >= std::abs(value)) break;
      r = next;
    }
    // Residual scale: sum |c_k| |r|^k.
    double scale = 0.0;
    for (int j = n; j >= 0; --j) scale = scale * std::abs(r) + std::abs(c[j]);
    if (std::abs(complex_eval(c, r)) > residual_tol * scale) {
      throw Error(ErrorCode::NotConverged,
                  "root polish failed near " + std::to_string(r.real()) + "+" +
                      std::to_string(r.imag()) + "i");
    }
    // Snap numerically real roots onto the axis and re-polish as a real root.
    if (std::abs(r.imag()) < 1e-8) {
      double x = r.real();
      for (int it = 0; it < 50; ++it) {
        const double value = real_eval(c, x);
        const double slope = real_eval(derivative, x);
        if (value == 0.0 || slope == 0.0) break;
        const double next = x - value / slope;
        if (std::abs(real_eval(c, next)) >= std::abs(value)) break;
        x = next;
      }
      r = {x, 0.0};
    }
    roots.push_back(r);
  }
  return roots;
}

}  // namespace chiral
