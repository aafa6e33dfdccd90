#include "chiral/chain_model.hpp"

#include "chiral/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace chiral {

namespace {

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries, unlike std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& engine) {
  const double u1 = 1.0 - unit_uniform(engine);  // (0, 1]
  const double u2 = unit_uniform(engine);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

ChainGeometry::ChainGeometry(std::vector<double> phases, double nominal_spacing,
                             double fluctuation_fraction)
    : phases_(std::move(phases)),
      nominal_spacing_(nominal_spacing),
      fluctuation_fraction_(fluctuation_fraction) {
  if (phases_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "chain needs at least one atom");
  }
  if (!(nominal_spacing_ > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "spacing must be positive");
  }
  for (std::size_t i = 1; i < phases_.size(); ++i) {
    if (!(phases_[i] > phases_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "atom phases must be strictly increasing (index " +
                      std::to_string(i) + ")");
    }
  }
}

ChiralRates::ChiralRates(double gamma_left, double gamma_right)
    : gamma_left_(gamma_left), gamma_right_(gamma_right) {
  if (!(gamma_left >= 0.0) || !(gamma_right >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "decay rates must be non-negative");
  }
  if (gamma_left == 0.0 && gamma_right == 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "at least one decay rate must be positive");
  }
}

ExcitationPattern::ExcitationPattern(int n_excited, Placement placement)
    : n_excited_(n_excited), placement_(placement) {
  if (n_excited < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "number of excited atoms must be positive");
  }
}

int ExcitationPattern::first_index(int n_atoms) const {
  if (n_excited_ > n_atoms) {
    throw Error(ErrorCode::InvalidArgument,
                "excited block (" + std::to_string(n_excited_) +
                    ") longer than chain (" + std::to_string(n_atoms) + ")");
  }
  if (placement_ == Placement::End) return 0;
  const int flanks = n_atoms - n_excited_;
  if (flanks % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "central excitation needs N - Ni even (N=" +
                    std::to_string(n_atoms) +
                    ", Ni=" + std::to_string(n_excited_) + ")");
  }
  return flanks / 2;
}

ChainGeometry build_positions(int n_atoms, double spacing, double fluctuation,
                              std::uint64_t seed, FluctuationLaw law) {
  if (n_atoms < 1) {
    throw Error(ErrorCode::InvalidArgument, "N must be at least 1");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorCode::InvalidArgument, "spacing xi must be positive");
  }
  if (!(fluctuation >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "fluctuation fraction must be non-negative");
  }
  if (fluctuation >= 1.0) {
    throw Error(ErrorCode::InvalidArgument,
                "fluctuation fraction >= 1 can reorder atoms");
  }

  std::vector<double> phases(static_cast<std::size_t>(n_atoms));
  for (int mu = 0; mu < n_atoms; ++mu) {
    phases[mu] = (mu + 1) * spacing;
  }
  if (fluctuation == 0.0) {
    return ChainGeometry(std::move(phases), spacing, fluctuation);
  }

  std::mt19937_64 engine(seed);
  const double half_width = 0.5 * fluctuation * spacing;
  const double sigma = half_width / std::sqrt(3.0);
  for (double& phase : phases) {
    double delta = 0.0;
    if (law == FluctuationLaw::Uniform) {
      delta = half_width * (2.0 * unit_uniform(engine) - 1.0);
    } else {
      do {
        delta = sigma * standard_normal(engine);
      } while (std::abs(delta) > half_width);
    }
    phase += delta;
  }
  return ChainGeometry(std::move(phases), spacing, fluctuation);
}

CouplingMatrix build_coupling_matrix(const ChainGeometry& geometry,
                                     const ChiralRates& rates) {
  const int n = geometry.n_atoms();
  const auto& phi = geometry.phases();
  CouplingMatrix v{ComplexMatrix(n, n), CouplingKind::Chiral};
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      if (mu == nu) {
        v.entries(mu, nu) = -0.5 * rates.total();
        continue;
      }
      const double rate = mu < nu ? rates.gamma_left() : rates.gamma_right();
      v.entries(mu, nu) = -rate * std::polar(1.0, -std::abs(phi[mu] - phi[nu]));
    }
  }
  return v;
}

CouplingMatrix reciprocal_kernel(const ChainGeometry& geometry, double gamma) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  }
  const int n = geometry.n_atoms();
  const auto& phi = geometry.phases();
  CouplingMatrix j{ComplexMatrix(n, n), CouplingKind::Reciprocal};
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      const double d = phi[mu] - phi[nu];
      j.entries(mu, nu) = gamma * Complex(std::cos(d), std::sin(std::abs(d)));
    }
  }
  return j;
}

double directionality(const ChiralRates& rates) {
  return (rates.gamma_right() - rates.gamma_left()) / rates.total();
}

ComplexVector build_initial_state(const ExcitationPattern& pattern,
                                  int n_atoms) {
  const int first = pattern.first_index(n_atoms);
  ComplexVector a = ComplexVector::Zero(n_atoms);
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(pattern.n_excited()));
  a.segment(first, pattern.n_excited()).setConstant(amplitude);
  return a;
}

}  // namespace chiral
