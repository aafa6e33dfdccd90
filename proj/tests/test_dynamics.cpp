#include "chiral/dynamics.hpp"
#include "chiral/error.hpp"
#include "chiral/matrix_exponential.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace chiral;
using std::numbers::pi;

namespace {

CouplingMatrix chain(int n, double xi, double gl, double gr) {
  return build_coupling_matrix(build_positions(n, xi, 0.0, 0), ChiralRates(gl, gr));
}

Eigen::VectorXcd end_state(int ni, int n) {
  return build_initial_state(ExcitationPattern(ni, Placement::End), n);
}

}  // namespace

TEST_CASE("propagator closed forms") {
  const auto one = step_propagator(chain(1, 1.0, 1.0, 1.0), 1.0);
  CHECK(std::abs(one(0, 0) - std::exp(-1.0)) < 1e-15);

  for (double dt : {0.01, 0.3, 2.0, 17.0}) {
    const auto u = step_propagator(chain(2, pi, 0.0, 1.0), dt);
    CHECK(std::abs(u(0, 0) - std::exp(-dt / 2)) < 1e-14);
    CHECK(std::abs(u(1, 0) - dt * std::exp(-dt / 2)) < 1e-13);
    CHECK(std::abs(u(0, 1)) < 1e-15);
    CHECK(std::abs(u(1, 1) - std::exp(-dt / 2)) < 1e-14);
  }

  const auto v = chain(5, 1.7, 0.3, 1.0);
  CHECK(step_propagator(v, 0.0).isIdentity(0.0));
  CHECK_THROWS_AS(step_propagator(v, -0.1), Error);
}

TEST_CASE("Pade exponential agrees with an independent implementation") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (double scale : {1e-3, 0.1, 0.9, 2.0, 5.0, 40.0, 300.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 2 + trial * 3;
      Eigen::MatrixXcd a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = {normal(rng), normal(rng)};
      // Dissipative shift keeps exp(A) bounded for large scales.
      a = scale * a / a.norm() - scale * Eigen::MatrixXcd::Identity(n, n);
      const Eigen::MatrixXcd ours = matrix_exponential(a);
      const Eigen::MatrixXcd reference = a.exp();
      const double denom = std::max(1e-300, reference.norm());
      CHECK((ours - reference).norm() / denom < 1e-11);
    }
  }
  // Defective input: a 6x6 Jordan block J = -I + N, exp(J) = e^{-1} sum N^k/k!.
  Eigen::MatrixXcd jordan = -Eigen::MatrixXcd::Identity(6, 6);
  for (int i = 0; i + 1 < 6; ++i) jordan(i, i + 1) = 1.0;
  const auto e = matrix_exponential(jordan);
  double factorial = 1.0;
  for (int k = 0; k < 6; ++k) {
    if (k > 0) factorial *= k;
    CHECK(std::abs(e(0, k) - std::exp(-1.0) / factorial) < 1e-15);
  }
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matrix_exponential(bad), Error);
}

TEST_CASE("time grid validation") {
  const TimeGrid g(100.0, 0.01);
  CHECK(g.steps() == 10000);
  CHECK(g.size() == 10001);
  CHECK(g.time(10000) == doctest::Approx(100.0));
  CHECK_THROWS_AS(TimeGrid(1.0, 0.3), Error);
  CHECK_THROWS_AS(TimeGrid(0.0, 0.1), Error);
  CHECK_THROWS_AS(TimeGrid(1.0, 0.0), Error);
  CHECK_THROWS_AS(TimeGrid(0.05, 0.1), Error);
}

TEST_CASE("evolution matches exact single and two atom solutions") {
  const TimeGrid grid(10.0, 0.01);
  const auto single = evolve(chain(1, 1.0, 1.0, 1.0), end_state(1, 1), grid);
  const auto total = single.total_population();
  for (std::size_t k = 0; k < total.size(); k += 97) {
    CHECK(std::abs(total.value[k] - std::exp(-2.0 * total.t[k])) < 1e-13);
  }

  for (double xi : {0.4, pi, 2.0 * pi}) {
    const auto pair = evolve(chain(2, xi, 0.0, 1.0), end_state(1, 2), grid);
    const auto p2 = pair.atom_population(1);
    double best = 0.0;
    double t_best = 0.0;
    for (std::size_t k = 0; k < p2.size(); ++k) {
      const double t = p2.t[k];
      CHECK(std::abs(p2.value[k] - t * t * std::exp(-t)) < 1e-12);
      if (p2.value[k] > best) {
        best = p2.value[k];
        t_best = t;
      }
    }
    CHECK(t_best == doctest::Approx(2.0));
    CHECK(best == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-12));
  }
}

TEST_CASE("uniform W in an even reciprocal chain at xi = pi does not decay") {
  for (int n : {2, 4, 6}) {
    const auto tr = evolve(chain(n, pi, 1.0, 1.0), end_state(n, n), TimeGrid(50.0, 0.05));
    for (double p : tr.total_population().value) CHECK(std::abs(p - 1.0) < 1e-12);
  }
}

TEST_CASE("stepwise propagation agrees with the direct exponential") {
  const auto v = chain(7, 1.1, 0.5, 1.0);
  const auto tr = evolve(v, end_state(3, 7), TimeGrid(200.0, 0.01));
  const std::vector<int> spots{0, 1, 137, 5000, 12345, 20000};
  CHECK(propagation_residual(v, tr, spots) < 1e-9);
}

TEST_CASE("evolve rejects mismatched or unnormalized input") {
  const auto v = chain(3, pi, 0.0, 1.0);
  const TimeGrid grid(1.0, 0.1);
  CHECK_THROWS_AS(evolve(v, end_state(1, 4), grid), Error);
  Eigen::VectorXcd loose = Eigen::VectorXcd::Zero(3);
  loose[0] = 0.5;
  CHECK_THROWS_AS(evolve(v, loose, grid), Error);
  CHECK_THROWS_AS(evolve_total_population(v, loose, grid), Error);
}

TEST_CASE("total population is non-increasing for random parameters") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const double gl = trial % 4 == 0 ? 0.0 : unit(rng);
    const double gr = trial % 7 == 0 ? 0.0 : 0.1 + unit(rng);
    const auto geo = build_positions(n, 0.1 + 6.0 * unit(rng), 0.5 * unit(rng), rng());
    const auto v = build_coupling_matrix(geo, ChiralRates(gl + (gr == 0.0 ? 0.2 : 0.0), gr));
    const int ni = 1 + static_cast<int>(rng() % n);
    const auto p = evolve_total_population(v, end_state(ni, n), TimeGrid(30.0, 0.02));
    CHECK(p.front() == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t k = 1; k < p.size(); ++k) {
      REQUIRE(p[k] <= p[k - 1] + 1e-12);
      REQUIRE(p[k] >= 0.0);
    }
  }
}

TEST_CASE("correlations factorize into populations") {
  const auto w = end_state(2, 4);
  const auto c = correlations(w);
  CHECK(c(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c(0, 2) == 0.0);
  CHECK(c(3, 3) == 0.0);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd a(6);
    for (int i = 0; i < 6; ++i) a[i] = {normal(rng), normal(rng)};
    a.normalize();
    const auto cc = correlations(a);
    const Eigen::VectorXd p = a.cwiseAbs2();
    for (int i = 0; i < 6; ++i) {
      CHECK(cc(i, i) == doctest::Approx(p[i] * p[i]).epsilon(1e-14));
      for (int j = 0; j < 6; ++j) {
        CHECK(cc(i, j) == cc(j, i));
        CHECK(cc(i, j) == doctest::Approx(p[i] * p[j]).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("channel rates equal the loss rate of the total population") {
  // Single atom.
  const auto g1 = build_positions(1, 1.0, 0.0, 0);
  Eigen::VectorXcd a1(1);
  a1[0] = Complex(0.6, 0.0);
  const auto r1 = channel_rates(a1, g1, ChiralRates(0.25, 0.75));
  CHECK(r1.total() == doctest::Approx(0.36).epsilon(1e-15));

  // Pointwise identity dP/dt = 2 Re(A^dagger V A) = -(R_L + R_R).
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 9;
    const ChiralRates rates(trial % 3 == 0 ? 0.0 : unit(rng), 0.1 + unit(rng));
    const auto geo = build_positions(n, 0.2 + 3.0 * unit(rng), 0.6 * unit(rng), rng());
    const auto v = build_coupling_matrix(geo, rates);
    Eigen::VectorXcd a(n);
    for (int i = 0; i < n; ++i) a[i] = {normal(rng), normal(rng)};
    a.normalize();
    const double dp = 2.0 * (a.adjoint() * v.entries * a)(0, 0).real();
    const auto r = channel_rates(a, geo, rates);
    CHECK(dp == doctest::Approx(-r.total()).epsilon(1e-12));
    if (rates.cascaded()) CHECK(r.left == 0.0);
  }
}

TEST_CASE("energy balance by trapezoidal quadrature") {
  const auto geo = build_positions(6, 1.4, 0.1, 8);
  const ChiralRates rates(0.4, 1.0);
  const auto v = build_coupling_matrix(geo, rates);
  const auto tr = evolve(v, end_state(2, 6), TimeGrid(20.0, 0.001));
  double integral = 0.0;
  double previous = channel_rates(tr.amplitude(0), geo, rates).total();
  for (int k = 1; k <= tr.grid().steps(); ++k) {
    const double current = channel_rates(tr.amplitude(k), geo, rates).total();
    integral += 0.5 * tr.grid().dt() * (previous + current);
    previous = current;
  }
  const auto total = tr.total_population();
  CHECK(std::abs(total.value.front() - total.value.back() - integral) < 1e-6);
}

TEST_CASE("cascaded oracle reproduces the closed forms") {
  for (double xi : {0.3, pi, 2.0}) {
    const auto chain1 = cascaded_oracle_chain(4, 1, xi);
    const auto chain2 = cascaded_oracle_chain(3, 2, xi);
    const Complex i(0.0, 1.0);
    for (double t : {0.0, 0.5, 1.7, 4.0, 9.3}) {
      const double decay = std::exp(-t / 2);
      CHECK(std::abs(chain1[0].amplitude(t) - decay) < 1e-15);
      CHECK(std::abs(chain1[1].amplitude(t) - (-t * decay * std::exp(-i * xi))) < 1e-14);
      CHECK(std::abs(chain1[2].amplitude(t) - 0.5 * t * (t - 2) * decay * std::exp(-2.0 * i * xi)) <
            1e-13);
      CHECK(std::abs(chain1[3].amplitude(t) -
                     (-1.0 / 6.0) * t * (t * t - 6 * t + 6) * decay * std::exp(-3.0 * i * xi)) <
            1e-13);

      const double r2 = std::sqrt(2.0);
      CHECK(std::abs(chain2[0].amplitude(t) - decay / r2) < 1e-15);
      CHECK(std::abs(chain2[1].amplitude(t) -
                     (std::exp(i * xi) - t) * decay * std::exp(-i * xi) / r2) < 1e-14);
      CHECK(std::abs(chain2[2].amplitude(t) -
                     (-t * (2.0 + 2.0 * std::exp(i * xi) - t) * decay * std::exp(-2.0 * i * xi) /
                      (2.0 * r2))) < 1e-13);
    }
  }
  CHECK(cascaded_oracle(5, 2, 1.0, 5).atom == 5);
  CHECK_THROWS_AS(cascaded_oracle(4, 1, pi, 5), Error);
  CHECK_THROWS_AS(cascaded_oracle(4, 5, pi, 2), Error);
}

TEST_CASE("cascaded polynomial degree and initial values") {
  for (int ni : {1, 2, 3}) {
    const double xi = 0.9;
    const auto chain = cascaded_oracle_chain(9, ni, xi);
    for (const auto& p : chain) {
      CHECK(p.degree() == p.atom - 1);
      const Complex at_zero = p.coefficients[0];
      if (p.atom <= ni) {
        CHECK(std::abs(at_zero - std::polar(1.0 / std::sqrt(double(ni)), (p.atom - 1) * xi)) <
              1e-15);
      } else {
        CHECK(at_zero == Complex(0.0, 0.0));
      }
    }
  }
}

TEST_CASE("numerical amplitudes agree with the cascaded oracle") {
  for (int ni : {1, 2, 3}) {
    for (double xi : {pi / 2, pi, 2 * pi}) {
      const int n = 8;
      const auto tr = evolve(chain(n, xi, 0.0, 1.0), end_state(ni, n), TimeGrid(20.0, 0.01));
      const auto oracle = cascaded_oracle_chain(n, ni, xi);
      double worst = 0.0;
      for (int k = 0; k <= tr.grid().steps(); k += 7) {
        for (int m = 0; m < n; ++m) {
          worst = std::max(worst, std::abs(tr.amplitudes()(m, k) - oracle[m].amplitude(tr.grid().time(k))));
        }
      }
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("zero crossings of the cascaded polynomials") {
  const auto c = cascaded_oracle_chain(11, 1, 0.7);
  CHECK(zero_crossings(c[0]).empty());
  CHECK(zero_crossings(c[1]).empty());
  const auto z3 = zero_crossings(c[2]);
  REQUIRE(z3.size() == 1);
  CHECK(z3[0] == doctest::Approx(2.0).epsilon(1e-12));
  const auto z4 = zero_crossings(c[3]);
  REQUIRE(z4.size() == 2);
  CHECK(z4[0] == doctest::Approx(3.0 - std::sqrt(3.0)).epsilon(1e-12));
  CHECK(z4[1] == doctest::Approx(3.0 + std::sqrt(3.0)).epsilon(1e-12));

  for (int m = 3; m <= 10; ++m) {
    const auto lower = zero_crossings(c[m - 1]);
    const auto upper = zero_crossings(c[m]);
    REQUIRE(lower.size() == static_cast<std::size_t>(m - 2));
    REQUIRE(upper.size() == static_cast<std::size_t>(m - 1));
    for (std::size_t j = 0; j < lower.size(); ++j) {
      CHECK(upper[j] < lower[j]);
      CHECK(lower[j] < upper[j + 1]);
    }
  }

  // Ni > 1 at xi = pi: m - Ni - 1 positive zeros (reference values from an
  // exact symbolic recursion).
  const auto c2 = cascaded_oracle_chain(6, 2, pi);
  CHECK(zero_crossings(c2[2]).empty());
  const auto z24 = zero_crossings(c2[3]);
  REQUIRE(z24.size() == 1);
  CHECK(z24[0] == doctest::Approx(3.0).epsilon(1e-12));
  const auto z25 = zero_crossings(c2[4]);
  REQUIRE(z25.size() == 2);
  CHECK(z25[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(z25[1] == doctest::Approx(6.0).epsilon(1e-12));
  const auto c3 = cascaded_oracle_chain(6, 3, pi);
  const auto z36 = zero_crossings(c3[5]);
  REQUIRE(z36.size() == 2);
  CHECK(z36[0] == doctest::Approx(1.1057).epsilon(1e-4));
  CHECK(z36[1] == doctest::Approx(6.5716).epsilon(1e-4));

  CHECK_THROWS_AS(zero_crossings(cascaded_oracle_chain(4, 2, 1.0)[3]), Error);
}
