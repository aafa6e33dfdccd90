#include "chiral/spectrum.hpp"

#include "chiral/error.hpp"

#include <algorithm>

namespace chiral {

namespace {

bool is_triangular(const ComplexMatrix& m) {
  const bool lower = m.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0);
  const bool upper = m.triangularView<Eigen::StrictlyLower>().toDenseMatrix().isZero(0.0);
  return lower || upper;
}

void sort_spectrum(std::vector<Complex>& values) {
  std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace

std::vector<Complex> eigenvalues(const CouplingMatrix& v) {
  const ComplexMatrix& m = v.entries;
  std::vector<Complex> values(static_cast<std::size_t>(m.rows()));
  if (is_triangular(m)) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) values[i] = m(i, i);
  } else {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::NotConverged, "complex eigenvalue solver failed");
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) values[i] = solver.eigenvalues()[i];
  }
  sort_spectrum(values);
  return values;
}

SpectralReport defectiveness(const CouplingMatrix& v, double tol) {
  const auto n = v.entries.rows();
  SpectralReport report;
  report.tolerance = tol > 0.0 ? tol : 1e-8 * static_cast<double>(n);
  report.eigenvalues = eigenvalues(v);

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(v.entries, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotConverged, "complex eigenvector solver failed");
  }
  ComplexMatrix vectors = solver.eigenvectors();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double norm = vectors.col(j).norm();
    if (norm > 0.0) vectors.col(j) /= norm;
  }
  const Eigen::JacobiSVD<ComplexMatrix> svd(vectors);
  report.min_singular_value = n > 0 ? svd.singularValues()(n - 1) : 0.0;
  report.defective = report.min_singular_value < report.tolerance;
  return report;
}

double non_normality(const CouplingMatrix& v) {
  const ComplexMatrix& m = v.entries;
  return (m * m.adjoint() - m.adjoint() * m).norm();
}

}  // namespace chiral
