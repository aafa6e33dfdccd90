#pragma once

#include <Eigen/Dense>

namespace chiral {

/// exp(A) for a dense complex matrix by Pade scaling and squaring
/// (degrees 3/5/7/9/13 selected on the 1-norm). Works for defective A.
/// Throws Error(NotConverged) if the result is not finite.
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a);

}  // namespace chiral
