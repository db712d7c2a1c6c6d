#pragma once

#include "ramanpol/engine.hpp"

#include <cstdint>
#include <vector>

namespace ramanpol {

/// One draw of the Langevin forces on the (mode, z cell, τ cell) lattice plus
/// the initial vibration amplitudes Q_n(z, 0).
///
/// Each force sample is the cell average of a delta-correlated field, so
/// ⟨|F|²⟩ = 2Γ/(ρ dz dτ). Initial amplitudes carry the stationary variance
/// of the damped, noise-driven mode, 1/(ρ dz), times the configured scale.
struct NoiseRealization {
  SimGrid grid;
  NoiseParams params;
  std::uint64_t seed = 0;
  std::vector<cplx> forces;   // layout [tau][z][mode]
  std::vector<cplx> initial;  // layout [z][mode]

  cplx& force(int mode, int z, int tau) {
    return forces[(static_cast<std::size_t>(tau) * grid.n_z + z) * 3 + mode];
  }
  const cplx& force(int mode, int z, int tau) const {
    return forces[(static_cast<std::size_t>(tau) * grid.n_z + z) * 3 + mode];
  }
  cplx& initial_amplitude(int mode, int z) { return initial[static_cast<std::size_t>(z) * 3 + mode]; }
  const cplx& initial_amplitude(int mode, int z) const {
    return initial[static_cast<std::size_t>(z) * 3 + mode];
  }

  double force_variance() const;
  double initial_variance() const;

  /// Multiplies every sample (forces and initial state) by `factor`.
  void scale(double factor);
};

/// Deterministic for a given (grid, params, seed).
NoiseRealization sample_noise(const SimGrid& grid, const NoiseParams& params, std::uint64_t seed);

/// Same as sample_noise but refills `out`, reusing its storage.
void sample_noise_into(NoiseRealization& out, const SimGrid& grid, const NoiseParams& params,
                       std::uint64_t seed);

/// All-zero realization on `grid`.
NoiseRealization zero_noise(const SimGrid& grid, const NoiseParams& params);

}  // namespace ramanpol
