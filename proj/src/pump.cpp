#include "ramanpol/pump.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ramanpol {

PumpEnvelope PumpEnvelope::flat() { return PumpEnvelope{}; }

PumpEnvelope PumpEnvelope::gaussian(double center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian envelope width must be positive");
  PumpEnvelope e;
  e.kind_ = Kind::kGaussian;
  e.center_ = center;
  e.width_ = width;
  e.label_ = "gaussian";
  return e;
}

PumpEnvelope PumpEnvelope::custom(Amplitude amplitude, std::string label) {
  if (!amplitude) throw std::invalid_argument("custom envelope needs a callable");
  PumpEnvelope e;
  e.kind_ = Kind::kCustom;
  e.custom_ = std::move(amplitude);
  e.label_ = std::move(label);
  return e;
}

std::complex<double> PumpEnvelope::operator()(double tau) const {
  switch (kind_) {
    case Kind::kFlat:
      return 1.0;
    case Kind::kGaussian: {
      const double u = (tau - center_) / width_;
      return std::exp(-0.5 * u * u);
    }
    case Kind::kCustom:
      return custom_(tau);
  }
  return 0.0;
}

double PumpEnvelope::intensity_integral(double lo, double hi) const {
  switch (kind_) {
    case Kind::kFlat:
      return hi - lo;
    case Kind::kGaussian:
      return 0.5 * std::sqrt(std::numbers::pi) * width_ *
             (std::erf((hi - center_) / width_) - std::erf((lo - center_) / width_));
    case Kind::kCustom: {
      if (hi == lo) return 0.0;
      auto f = [this](double t) { return std::norm(custom_(t)); };
      return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-12);
    }
  }
  return 0.0;
}

PumpConfig PumpConfig::transverse(double angle, PumpEnvelope envelope, double gain_scale) {
  PumpConfig p;
  p.polarization = Vec3(std::cos(angle), std::sin(angle), 0.0);
  p.envelope = std::move(envelope);
  p.gain_scale = gain_scale;
  p.validate();
  return p;
}

void PumpConfig::validate() const {
  if (std::abs(polarization.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("pump polarization must be a unit vector");
  }
  if (std::abs(polarization.z()) > 1e-9) {
    throw std::invalid_argument("pump polarization must be orthogonal to the propagation axis");
  }
  if (!(gain_scale >= 0.0) || !std::isfinite(gain_scale)) {
    throw std::invalid_argument("pump gain scale must be finite and non-negative");
  }
}

double pump_integral(const PumpConfig& pump, double tau_lo, double tau_hi) {
  if (tau_hi < tau_lo) throw std::invalid_argument("pump_integral: reversed bounds");
  if (pump.gain_scale == 0.0) return 0.0;
  return pump.gain_scale * pump.envelope.intensity_integral(tau_lo, tau_hi);
}

double gain_scale_for_total_gain(double total_gain, const PumpEnvelope& envelope, double window,
                                 double length) {
  if (!(total_gain >= 0.0)) throw std::invalid_argument("total gain must be non-negative");
  if (!(window > 0.0) || !(length > 0.0)) {
    throw std::invalid_argument("window and length must be positive");
  }
  const double energy = envelope.intensity_integral(0.0, window);
  if (!(energy > 0.0)) throw std::invalid_argument("pump envelope carries no energy in the window");
  return total_gain / (energy * length);
}

}  // namespace ramanpol
