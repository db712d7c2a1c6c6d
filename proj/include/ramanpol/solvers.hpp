#pragma once

#include "ramanpol/field.hpp"
#include "ramanpol/noise.hpp"

#include <vector>

namespace ramanpol {

struct FdOptions {
  bool record_interior = false;
  /// |E|² or |Q|² above this aborts the march.
  double overflow_guard = 1e200;
};

/// Resolution rules for the marching solver: Γ dτ <= 0.1, a(window,0)·dz <= 0.1
/// and the per-step pump integral times the length <= 0.1. Throws
/// NumericalError naming the violated rule.
void check_fd_resolution(const SimulationSetup& setup);

/// Marches the coupled vibration/Stokes equations over the (z, τ) grid.
///
/// Vibrations live at z-cell centres and are advanced in τ with an
/// exponential (ETD2) integrator: damping is exact, the Langevin increment
/// carries the exact Ornstein-Uhlenbeck variance, and the pump-driven term is
/// second order. The Stokes field is accumulated in z by the midpoint rule,
/// starting from E_S(0, τ) = 0.
FieldRealization propagate_fd(const SimulationSetup& setup, const NoiseRealization& noise,
                              const FdOptions& options = {});

/// Green's-function solution of the symmetric configuration, where the
/// transverse gain is isotropic and each Stokes component is an independent
/// integral of the noise against
///   H = e^{-Γ(τ-τ')} I0(√(4 λ (z-z') a(τ,τ'))).
/// The kernel is tabulated once per setup; propagate() is then a pure
/// contraction and may be called concurrently.
class GreenPropagator {
 public:
  /// Rejects setups whose transverse gain is not isotropic.
  explicit GreenPropagator(const SimulationSetup& setup);

  FieldRealization propagate(const NoiseRealization& noise) const;

  /// Deterministic ⟨|ê·E_S(L, τ)|²⟩ at every τ node for any transverse unit
  /// vector ê: the quadrature of (2Γ/ρ)·H² over the source plane. With
  /// `amplified == false` the Bessel factor is replaced by 1 (spontaneous
  /// scattering at the same pump strength).
  std::vector<double> component_intensity(bool amplified = true) const;

  /// τ-integral (trapezoid) of component_intensity().
  double component_energy(bool amplified = true) const;

  const SimulationSetup& setup() const { return setup_; }

 private:

  SimulationSetup setup_;
  TransverseCoupling coupling_;
  double lambda_ = 1.0;
  double weight_ = 0.0;  // τ-cell weight of one force sample
  std::vector<double> cumulative_;       // a(τ, 0) at half-step resolution
  std::vector<double> table_;            // [n][k < n][z cell]
  std::vector<double> initial_table_;    // [n][z cell]
};

/// One-shot convenience wrapper around GreenPropagator.
FieldRealization analytic_realization(const SimulationSetup& setup, const NoiseRealization& noise);

}  // namespace ramanpol
