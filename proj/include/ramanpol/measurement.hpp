#pragma once

#include "ramanpol/field.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace ramanpol {

/// Measurable window of the energy digitizer. Each reading gets additive
/// Gaussian noise of standard deviation `sigma` before the window check.
struct DigitizerConfig {
  double floor = 0.0;
  double ceiling = std::numeric_limits<double>::infinity();
  double sigma = 0.0;

  /// Window and noise given as multiples of `mean_energy`.
  static DigitizerConfig relative(double mean_energy, double floor_rel, double ceiling_rel,
                                  double sigma_rel);
  /// Requires 0 <= floor < ceiling and sigma >= 0.
  void validate() const;
};

struct Calibration {
  double eta = 1.0;
  double mean_theta_deg = 0.0;  ///< mean θ of the calibration set after correction
  int samples = 0;

  void validate() const;
};

/// Measured orientation in degrees, [0, 90]:
///   θ = atan(√(e_h / (η e_v)))          if e_h <= η e_v
///   θ = 90° - atan(√(η e_v / e_h))      otherwise.
/// Throws std::invalid_argument for negative energies or e_h = e_v = 0.
double theta_from_energies(double e_h, double e_v, double eta);

/// Picks η so that the mean θ of `samples` (pairs of (e_h, e_v)) equals
/// `target_deg`. The root is searched in log η over [1e-6, 1e6]; throws
/// NumericalError if it is not bracketed or the residual exceeds 0.01°.
Calibration calibrate_eta(std::span<const std::pair<double, double>> samples,
                          double target_deg = 35.3);

/// Energies arriving at the two detector arms. The "v" arm analyzes along
/// `basis_deg` from lab x (the [-110] axis by default), the "h" arm along
/// basis_deg + 90°.
struct DetectorEnergies {
  double e_h = 0.0;
  double e_v = 0.0;
};

DetectorEnergies detector_energies(const PulseSample& s, double basis_deg = 0.0,
                                   double transmission_h = 1.0, double transmission_v = 1.0);

struct DigitizedReading {
  double e_h = 0.0;
  double e_v = 0.0;
  bool measurable = true;
};

/// Adds the digitizer noise (seeded per call) and applies the window: the
/// pulse is unmeasurable if either reading falls outside [floor, ceiling].
DigitizedReading apply_digitizer(const DetectorEnergies& e, const DigitizerConfig& cfg,
                                 std::uint64_t seed);

/// Density (per degree, unit integral over [0°, 90°]) of measured θ for
/// pulses with uniform orientation and Exponential(energy_scale) total
/// energy, keeping only pulses whose components e_h = E sin²θ and
/// e_v = E cos²θ both land inside the digitizer window.
std::vector<double> expected_measured_density(std::span<const double> theta_deg,
                                              const DigitizerConfig& cfg, double energy_scale);

/// Probability mass of the same density over each bin [edges[i], edges[i+1]].
std::vector<double> expected_bin_probabilities(std::span<const double> edges_deg,
                                               const DigitizerConfig& cfg, double energy_scale);

}  // namespace ramanpol
