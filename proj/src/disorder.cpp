#include "chiral/disorder.hpp"

#include "chiral/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

namespace chiral {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void validate(const EnsembleConfig& c) {
  if (c.batch_size < 1) {
    throw Error(ErrorCode::InvalidArgument, "batch_size must be at least 1");
  }
  if (c.max_realizations < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_realizations must be at least 1");
  }
  if (!(c.convergence_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "convergence_tol must be positive");
  }
  c.pattern.first_index(c.n_atoms);
}

std::vector<double> realization(const EnsembleConfig& c, int index,
                                const Eigen::VectorXcd& initial) {
  try {
    const ChainGeometry geometry =
        build_positions(c.n_atoms, c.spacing, c.fluctuation,
                        derive_seed(c.master_seed, static_cast<std::uint64_t>(index)), c.law);
    return evolve_total_population(build_coupling_matrix(geometry, c.rates), initial, c.grid);
  } catch (const Error& e) {
    throw Error(e.code(), "realization " + std::to_string(index) + ": " + e.what());
  }
}

// Evaluates realizations [first, first + count) into slots, in parallel.
void run_chunk(const EnsembleConfig& c, int workers, int first, int count,
               const Eigen::VectorXcd& initial, std::vector<std::vector<double>>& slots) {
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int j = next++; j < count; j = next++) {
      try {
        slots[j] = realization(c, first + j, initial);
      } catch (...) {
        failures[j] = std::current_exception();
      }
    }
  };
  const int threads = std::min(workers, count);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(work);
  }
  // Lowest failing index wins, whatever order the threads hit them in.
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

int worker_count_from_environment() {
  if (const char* env = std::getenv("CHIRAL_WORKERS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0 && value <= 4096) {
      return static_cast<int>(value);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleResult run_ensemble(const EnsembleConfig& config) {
  validate(config);
  const int workers = config.workers > 0 ? config.workers : worker_count_from_environment();
  const Eigen::VectorXcd initial = build_initial_state(config.pattern, config.n_atoms);

  RunningStats stats(config.grid.times());
  EnsembleResult result;
  std::vector<double> previous_mean;

  // Chunks bound memory to a few series per worker; merging stays in index order.
  const int chunk = std::max(1, std::min(config.batch_size, 4 * workers));
  std::vector<std::vector<double>> slots(static_cast<std::size_t>(chunk));

  int done = 0;
  while (done < config.max_realizations) {
    const int batch_end = std::min(done + config.batch_size, config.max_realizations);
    for (int first = done; first < batch_end; first += chunk) {
      const int count = std::min(chunk, batch_end - first);
      run_chunk(config, workers, first, count, initial, slots);
      for (int j = 0; j < count; ++j) stats.add(slots[j]);
    }
    done = batch_end;

    if (!previous_mean.empty()) {
      double delta = 0.0;
      for (std::size_t k = 0; k < previous_mean.size(); ++k) {
        delta = std::max(delta, std::abs(stats.mean()[k] - previous_mean[k]));
      }
      result.batch_deltas.push_back(delta);
      if (delta < config.convergence_tol) {
        result.converged = true;
        break;
      }
    }
    previous_mean = stats.mean();
  }

  result.realizations_used = stats.count();
  result.stats = stats.snapshot();
  return result;
}

}  // namespace chiral
