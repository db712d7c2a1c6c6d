#pragma once

#include "ramanpol/crystal_optics.hpp"
#include "ramanpol/pump.hpp"

#include <array>
#include <complex>
#include <vector>

namespace ramanpol {

using cplx = std::complex<double>;
using Jones = std::array<cplx, 2>;
using ModeVector = std::array<cplx, 3>;

/// (z, τ) domain. z runs over [0, length] in n_z cells; τ over [0, window]
/// (units of 1/Γ) in n_tau steps.
struct SimGrid {
  int n_z = 200;
  int n_tau = 200;
  double length = 1.0;
  double window = 1.0;

  double dz() const { return length / n_z; }
  double dtau() const { return window / n_tau; }
  /// Throws std::invalid_argument for n < 2 or non-positive extents.
  void validate() const;
};

/// How the c-number Langevin forces populate the complex plane.
///
/// kInPhase draws real Gaussian forces, so every mode shares one phase and
/// the amplified pulse is linearly polarized. kCircular draws independent
/// circular complex Gaussians, which yields elliptical pulses. Both give
/// ⟨F*F⟩ = 2Γ/(ρ dz dτ) per cell.
enum class NoiseQuadrature { kInPhase, kCircular };

struct NoiseParams {
  double gamma = 1.0;
  double rho = 1.0;
  NoiseQuadrature quadrature = NoiseQuadrature::kInPhase;
  /// Multiplies the stationary variance used for the initial vibration state.
  double initial_variance_scale = 1.0;

  void validate() const;
};

/// Everything a solver needs besides the noise draw. Tensors and pump are in
/// the laboratory frame (propagation along z).
struct SimulationSetup {
  RamanTensorSet tensors = rotate_tensor_set(f2g_tensors(1.0), lab_basis_110());
  PumpConfig pump;
  SimGrid grid;
  NoiseParams noise;

  void validate() const;
};

/// Transverse projections of the vectors κ_n p / d: column n holds the (x, y)
/// coupling of mode n. The longitudinal part cannot radiate in a 1-D
/// paraxial model and is dropped.
struct TransverseCoupling {
  std::array<std::array<double, 2>, 3> v;

  /// 2x2 transverse gain tensor Σ_n v_n v_nᵀ.
  std::array<std::array<double, 2>, 2> gain() const;
  /// True if the transverse gain is λ·I within `tol` (λ returned via `lambda`).
  bool isotropic(double tol, double* lambda = nullptr) const;
};

TransverseCoupling transverse_coupling(const RamanTensorSet& tensors, const Vec3& pump_pol);

}  // namespace ramanpol
