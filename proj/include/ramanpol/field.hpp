#pragma once

#include "ramanpol/engine.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace ramanpol {

/// Stokes field of one noise draw. `output` is the transverse field at
/// z = length for every τ node (n_tau + 1 values). Solvers that march the
/// whole domain may also keep the interior grids.
struct FieldRealization {
  SimGrid grid;
  std::vector<Jones> output;

  std::vector<Jones> stokes;            // [z node][tau node], (n_z+1)(n_tau+1)
  std::vector<ModeVector> vibrations;   // [z cell][tau node], n_z (n_tau+1)

  bool has_interior() const { return !stokes.empty(); }
};

/// Pulse-level summary of a realization: τ-integrated coherency matrix of
/// the output field. x is the lab x-axis (the θ reference direction).
struct PulseSample {
  double e_x = 0.0;
  double e_y = 0.0;
  double cross = 0.0;           ///< Re ∫ E_x E_y* dτ
  double cross_imag = 0.0;      ///< Im ∫ E_x E_y* dτ (zero for linear fields)
  double energy = 0.0;          ///< e_x + e_y
  double theta_true_deg = 0.0;  ///< principal-axis orientation in [0, 180)
  double dop = 0.0;             ///< degree of polarization
  bool valid = false;           ///< false for an all-zero field

  /// Energy polarized along `angle_deg` from x (projection of the
  /// coherency matrix).
  double energy_along(double angle_deg) const;
  /// Largest eigenvalue of the coherency matrix, the energy carried by the
  /// pulse's principal polarization component.
  double principal_energy() const;
};

PulseSample realization_to_sample(const FieldRealization& f);

/// Debug dump: header of five little-endian 64-bit words (n_z, n_tau, Γ, ρ,
/// seed) followed by row-major (re, im) float64 pairs: the Stokes grid
/// [z node][tau node][x,y] and then the vibration grid [z cell][tau node][mode].
void write_field_dump(const std::filesystem::path& path, const FieldRealization& f,
                      const NoiseParams& params, std::uint64_t seed);

struct FieldDump {
  std::uint64_t n_z = 0;
  std::uint64_t n_tau = 0;
  double gamma = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  std::vector<cplx> stokes;
  std::vector<cplx> vibrations;
};
FieldDump read_field_dump(const std::filesystem::path& path);

}  // namespace ramanpol
