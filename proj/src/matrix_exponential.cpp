#include "chiral/matrix_exponential.hpp"

#include "chiral/error.hpp"

#include <array>
#include <cmath>

namespace chiral {

namespace {

using Matrix = Eigen::MatrixXcd;

// Largest 1-norms for which the degree-m approximant is accurate to unit
// roundoff in double precision.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

struct PadeTerms {
  Matrix u;  // odd part
  Matrix v;  // even part
};

template <std::size_t K>
PadeTerms pade_low(const Matrix& a, const std::array<double, K>& b) {
  const auto n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix odd = b[1] * id;
  Matrix even = b[0] * id;
  Matrix power = id;
  for (std::size_t k = 2; k < K; k += 2) {
    power = power * a2;
    even += b[k] * power;
    if (k + 1 < K) odd += b[k + 1] * power;
  }
  return {a * odd, even};
}

PadeTerms pade13(const Matrix& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const auto n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  const Matrix u = a * (inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix inner_v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  const Matrix v = inner_v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return {u, v};
}

}  // namespace

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix exponential needs a square matrix");
  }
  if (!a.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "matrix exponential of non-finite matrix");
  }
  const auto n = a.rows();
  if (n == 0) return a;

  // 1-norm: largest absolute column sum.
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();

  Matrix scaled = a;
  int squarings = 0;
  PadeTerms terms;
  if (norm <= kTheta3) {
    terms = pade_low(a, std::array<double, 4>{120.0, 60.0, 12.0, 1.0});
  } else if (norm <= kTheta5) {
    terms = pade_low(a, std::array<double, 6>{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0});
  } else if (norm <= kTheta7) {
    terms = pade_low(a, std::array<double, 8>{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                              25200.0, 1512.0, 56.0, 1.0});
  } else if (norm <= kTheta9) {
    terms = pade_low(a, std::array<double, 10>{17643225600.0, 8821612800.0, 2075673600.0,
                                               302702400.0, 30270240.0, 2162160.0, 110880.0,
                                               3960.0, 90.0, 1.0});
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    scaled = a / std::ldexp(1.0, squarings);
    terms = pade13(scaled);
  }

  const Eigen::PartialPivLU<Matrix> denominator(terms.v - terms.u);
  Matrix result = denominator.solve(terms.v + terms.u);
  for (int k = 0; k < squarings; ++k) {
    result = result * result;
  }
  if (!result.allFinite()) {
    throw Error(ErrorCode::NotConverged,
                "matrix exponential produced non-finite entries (1-norm " +
                    std::to_string(norm) + ", " + std::to_string(squarings) +
                    " squarings)");
  }
  return result;
}

}  // namespace chiral
