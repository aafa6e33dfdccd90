#include "chiral/disorder.hpp"
#include "chiral/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace chiral;

namespace {

EnsembleConfig small_config() {
  EnsembleConfig c;
  c.n_atoms = 6;
  c.pattern = ExcitationPattern(2, Placement::End);
  c.grid = TimeGrid(20.0, 0.05);
  c.fluctuation = 0.2;
  c.batch_size = 20;
  c.max_realizations = 60;
  c.master_seed = 2024;
  c.convergence_tol = 1e-12;
  c.workers = 1;
  return c;
}

}  // namespace

TEST_CASE("seed derivation is deterministic and collision free") {
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  CHECK(derive_seed(7, 3) != derive_seed(7, 4));
  CHECK(derive_seed(7, 3) != derive_seed(8, 3));

  std::vector<std::uint64_t> seeds;
  seeds.reserve(1000000);
  for (std::uint64_t i = 0; i < 1000000; ++i) seeds.push_back(derive_seed(99, i));
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());

  std::vector<std::uint64_t> across;
  for (std::uint64_t m = 0; m < 100; ++m)
    for (std::uint64_t i = 0; i < 100; ++i) across.push_back(derive_seed(m, i));
  std::sort(across.begin(), across.end());
  CHECK(std::adjacent_find(across.begin(), across.end()) == across.end());
}

TEST_CASE("ordered lattice gives a zero-width band and converges") {
  auto c = small_config();
  c.fluctuation = 0.0;
  const auto r = run_ensemble(c);
  CHECK(r.converged);
  CHECK(r.realizations_used == 40);
  for (double s : r.stats.stddev) CHECK(s < 1e-14);
}

TEST_CASE("ensemble mean equals a direct average over derived seeds") {
  const auto c = small_config();
  const auto r = run_ensemble(c);
  REQUIRE(r.realizations_used == c.max_realizations);
  CHECK_FALSE(r.converged);
  CHECK(r.batch_deltas.size() == 2);

  std::vector<double> mean(c.grid.size(), 0.0);
  for (int i = 0; i < c.max_realizations; ++i) {
    const auto geo = build_positions(c.n_atoms, c.spacing, c.fluctuation,
                                     derive_seed(c.master_seed, i), c.law);
    const auto p = evolve_total_population(build_coupling_matrix(geo, c.rates),
                                           build_initial_state(c.pattern, c.n_atoms), c.grid);
    for (std::size_t k = 0; k < p.size(); ++k) mean[k] += p[k] / c.max_realizations;
  }
  for (std::size_t k = 0; k < mean.size(); ++k) {
    CHECK(r.stats.mean[k] == doctest::Approx(mean[k]).epsilon(1e-12));
  }
  double widest = 0.0;
  for (double s : r.stats.stddev) widest = std::max(widest, s);
  CHECK(widest > 1e-4);
}

TEST_CASE("results do not depend on the worker count") {
  auto c = small_config();
  c.law = FluctuationLaw::Gaussian;
  const auto one = run_ensemble(c);
  c.workers = 4;
  const auto four = run_ensemble(c);
  CHECK(one.realizations_used == four.realizations_used);
  CHECK(one.stats.mean == four.stats.mean);
  CHECK(one.stats.stddev == four.stats.stddev);
  CHECK(one.batch_deltas == four.batch_deltas);

  c.master_seed += 1;
  CHECK(run_ensemble(c).stats.mean != one.stats.mean);
}

TEST_CASE("invalid ensemble settings are rejected") {
  auto c = small_config();
  c.batch_size = 0;
  CHECK_THROWS_AS(run_ensemble(c), Error);
  c = small_config();
  c.convergence_tol = 0.0;
  CHECK_THROWS_AS(run_ensemble(c), Error);
  c = small_config();
  c.pattern = ExcitationPattern(7, Placement::End);
  CHECK_THROWS_AS(run_ensemble(c), Error);
}
