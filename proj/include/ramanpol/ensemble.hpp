#pragma once

#include "ramanpol/field.hpp"
#include "ramanpol/noise.hpp"
#include "ramanpol/solvers.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ramanpol {

enum class Solver { kFiniteDifference, kGreen };

/// Runs one realization with the given solver. For repeated Green solves
/// build a GreenPropagator once and call propagate() instead.
FieldRealization solve(const SimulationSetup& setup, const NoiseRealization& noise, Solver solver);

/// Monte Carlo projected pulse energies ⟨∫|ê(ψ)·E_S(L,τ)|² dτ⟩ with their
/// standard errors, the total energy, and (isotropic setups only) the
/// deterministic quadrature of the same mean. `quadrature` is NaN when the
/// transverse gain is anisotropic.
struct EnsembleIntensity {
  std::vector<double> psi_deg;
  std::vector<double> mean;
  std::vector<double> std_error;
  double total_mean = 0.0;
  double total_std_error = 0.0;
  double quadrature = 0.0;
  int realizations = 0;
};

/// Requires n_realizations >= 100. Realization i uses the noise seed
/// derive_seed(seed, streams::kNoise, i), so runs are reproducible
/// for any thread count.
EnsembleIntensity ensemble_intensity(const SimulationSetup& setup, std::span<const double> psi_deg,
                                     int n_realizations, std::uint64_t seed,
                                     Solver solver = Solver::kFiniteDifference, int threads = 0);

/// Pulse samples for realizations [first, first + count) of `seed`, ordered
/// by index.
std::vector<PulseSample> simulate_pulses(const SimulationSetup& setup, std::uint64_t seed,
                                         std::size_t first, std::size_t count, Solver solver,
                                         int threads = 0);

}  // namespace ramanpol
