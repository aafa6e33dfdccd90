#pragma once

#include "chiral/analysis.hpp"
#include "chiral/chain_model.hpp"
#include "chiral/dynamics.hpp"

#include <cstdint>
#include <vector>

namespace chiral {

struct EnsembleConfig {
  int n_atoms = 12;
  double spacing = 3.141592653589793;
  ChiralRates rates{0.0, 1.0};
  ExcitationPattern pattern{1, Placement::End};
  TimeGrid grid{100.0, 0.01};
  double fluctuation = 0.0;
  FluctuationLaw law = FluctuationLaw::Uniform;
  int batch_size = 500;
  int max_realizations = 10000;
  double convergence_tol = 1e-3;
  std::uint64_t master_seed = 0;
  /// Worker threads; 0 means worker_count_from_environment().
  int workers = 0;
};

struct EnsembleResult {
  int realizations_used = 0;
  EnsembleSeries stats;
  bool converged = false;
  /// Sup-norm change of the running mean after each batch past the first.
  std::vector<double> batch_deltas;
};

/// Per-realization seed: SplitMix64 finalizer over the mixed master seed
/// plus a Weyl step per index. Bijective in index for a fixed master.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// CHIRAL_WORKERS if set to a positive integer, else hardware concurrency.
int worker_count_from_environment();

/// Static-disorder ensemble of P_tot(t). Realization i uses
/// build_positions(seed = derive_seed(master, i)); results are merged in
/// index order so the output is independent of the worker count.
EnsembleResult run_ensemble(const EnsembleConfig& config);

}  // namespace chiral
