#pragma once

#include "ramanpol/crystal_optics.hpp"

#include <complex>
#include <functional>
#include <string>

namespace ramanpol {

/// Normalized temporal amplitude ε(τ) of the undepleted pump (peak |ε| = 1
/// for the built-in shapes).
class PumpEnvelope {
 public:
  using Amplitude = std::function<std::complex<double>(double)>;

  /// ε(τ) = 1.
  static PumpEnvelope flat();
  /// ε(τ) = exp(-(τ - center)² / (2 width²)), so |ε|² has 1/e half-width `width`.
  static PumpEnvelope gaussian(double center, double width);
  /// Arbitrary amplitude; intensity integrals use adaptive quadrature.
  static PumpEnvelope custom(Amplitude amplitude, std::string label = "custom");

  std::complex<double> operator()(double tau) const;

  /// ∫_lo^hi |ε(τ)|² dτ. Closed form for the built-in shapes.
  double intensity_integral(double lo, double hi) const;

  const std::string& label() const { return label_; }

 private:
  enum class Kind { kFlat, kGaussian, kCustom };
  Kind kind_ = Kind::kFlat;
  double center_ = 0.0;
  double width_ = 1.0;
  Amplitude custom_;
  std::string label_ = "flat";
};

/// Pump field in the laboratory frame. Propagation is along +z; the
/// polarization is a unit vector in the xy-plane.
///
/// `gain_scale` folds C·d²·peak|E_p|² into one dimensionless number, so that
/// the pump integral a(τ, τ') = gain_scale · ∫|ε|².
struct PumpConfig {
  Vec3 polarization = Vec3::UnitX();
  PumpEnvelope envelope = PumpEnvelope::flat();
  double gain_scale = 0.0;

  /// Polarization at `angle` (radians) from lab x towards lab y.
  static PumpConfig transverse(double angle, PumpEnvelope envelope, double gain_scale);

  /// Throws std::invalid_argument on a non-unit or longitudinal polarization
  /// or a negative gain scale.
  void validate() const;
};

/// a(tau_lo, tau_hi) = gain_scale · ∫_{tau_lo}^{tau_hi} |ε|² dτ.
double pump_integral(const PumpConfig& pump, double tau_lo, double tau_hi);

/// Gain scale for which the total gain G = a(window, 0) · length.
double gain_scale_for_total_gain(double total_gain, const PumpEnvelope& envelope, double window,
                                 double length);

}  // namespace ramanpol
