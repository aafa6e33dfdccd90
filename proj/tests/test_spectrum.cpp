#include "chiral/spectrum.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace chiral;
using std::numbers::pi;

namespace {

CouplingMatrix chain(int n, double xi, double gl, double gr) {
  return build_coupling_matrix(build_positions(n, xi, 0.0, 0), ChiralRates(gl, gr));
}

}  // namespace

TEST_CASE("two-atom reciprocal eigenvalues") {
  for (double xi : {0.3, pi / 2, 2.5}) {
    const auto ev = eigenvalues(chain(2, xi, 1.0, 1.0));
    REQUIRE(ev.size() == 2);
    const Complex shift = std::exp(Complex(0.0, -xi));
    const Complex a = -1.0 + shift;
    const Complex b = -1.0 - shift;
    const bool direct = std::abs(ev[0] - b) < 1e-12 && std::abs(ev[1] - a) < 1e-12;
    const bool swapped = std::abs(ev[0] - a) < 1e-12 && std::abs(ev[1] - b) < 1e-12;
    CHECK((direct || swapped));
  }
}

TEST_CASE("reciprocal chain at xi = pi has one bright mode") {
  for (int n : {3, 8, 13}) {
    const auto v = chain(n, pi, 1.0, 1.0);
    const auto ev = eigenvalues(v);
    CHECK(std::abs(ev.front() - Complex(-n, 0.0)) < 1e-10);
    for (std::size_t k = 1; k < ev.size(); ++k) CHECK(std::abs(ev[k]) < 1e-10);
    CHECK(non_normality(v) < 1e-12);
    CHECK_FALSE(defectiveness(v).defective);
  }
}

TEST_CASE("cascaded chain is a single defective eigenvalue") {
  for (int n : {2, 5, 12}) {
    const auto v = chain(n, pi, 0.0, 1.0);
    for (const auto& e : eigenvalues(v)) CHECK(e == Complex(-0.5, 0.0));
    const auto report = defectiveness(v);
    CHECK(report.defective);
    CHECK(report.min_singular_value < report.tolerance);
    CHECK(non_normality(v) > 0.1);
  }
  CHECK_FALSE(defectiveness(chain(1, pi, 0.0, 1.0)).defective);
}

TEST_CASE("spectrum sums to the trace and is sorted") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + trial % 11;
    const ChiralRates rates(0.05 + unit(rng), 0.05 + unit(rng));
    const auto v = build_coupling_matrix(build_positions(n, 0.2 + 3.0 * unit(rng), 0.3 * unit(rng), rng()), rates);
    const auto ev = eigenvalues(v);
    Complex sum{0.0, 0.0};
    for (const auto& e : ev) {
      sum += e;
      CHECK(e.real() <= 1e-12);
    }
    CHECK(std::abs(sum - v.entries.trace()) < 1e-10);
    for (std::size_t k = 1; k < ev.size(); ++k) CHECK(ev[k - 1].real() <= ev[k].real());
    CHECK_FALSE(defectiveness(v).defective);
  }
}
