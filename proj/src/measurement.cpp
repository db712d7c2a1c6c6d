#include "ramanpol/measurement.hpp"
#include "ramanpol/errors.hpp"
#include "ramanpol/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ramanpol {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

DigitizerConfig DigitizerConfig::relative(double mean_energy, double floor_rel, double ceiling_rel,
                                          double sigma_rel) {
  if (!(mean_energy > 0.0)) throw std::invalid_argument("digitizer: mean energy must be positive");
  DigitizerConfig c{floor_rel * mean_energy, ceiling_rel * mean_energy, sigma_rel * mean_energy};
  c.validate();
  return c;
}

void DigitizerConfig::validate() const {
  if (!(floor >= 0.0) || !(ceiling > floor)) {
    throw std::invalid_argument("digitizer: need 0 <= floor < ceiling");
  }
  if (!(sigma >= 0.0) || std::isinf(sigma)) throw std::invalid_argument("digitizer: sigma must be >= 0");
}

void Calibration::validate() const {
  if (!(eta > 0.0) || std::isinf(eta)) throw std::invalid_argument("calibration: eta must be positive");
}

double theta_from_energies(double e_h, double e_v, double eta) {
  if (!(e_h >= 0.0) || !(e_v >= 0.0)) {
    throw std::invalid_argument("theta_from_energies: energies must be non-negative");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("theta_from_energies: eta must be positive");
  if (e_h == 0.0 && e_v == 0.0) {
    throw std::invalid_argument("theta_from_energies: angle undefined when both energies are zero");
  }
  if (e_h <= eta * e_v) return std::atan(std::sqrt(e_h / (eta * e_v))) / kDeg;
  return 90.0 - std::atan(std::sqrt(eta * e_v / e_h)) / kDeg;
}

Calibration calibrate_eta(std::span<const std::pair<double, double>> samples, double target_deg) {
  if (samples.size() < 100) throw InsufficientData("calibrate_eta: need at least 100 samples");
  if (!(target_deg > 0.0 && target_deg < 90.0)) {
    throw std::invalid_argument("calibrate_eta: target must lie in (0, 90) degrees");
  }
  auto mean_theta = [&](double log_eta) {
    const double eta = std::exp(log_eta);
    double s = 0.0;
    for (const auto& [h, v] : samples) s += theta_from_energies(h, v, eta);
    return s / samples.size();
  };
  auto f = [&](double log_eta) { return mean_theta(log_eta) - target_deg; };
  const double lo = std::log(1e-6), hi = std::log(1e6);
  const double flo = f(lo), fhi = f(hi);
  if (flo * fhi > 0.0) {
    std::ostringstream msg;
    msg << "calibration failed: mean theta spans [" << fhi + target_deg << ", " << flo + target_deg
        << "] degrees for eta in [1e-6, 1e6], target " << target_deg << " is not bracketed";
    throw NumericalError(msg.str());
  }
  std::uintmax_t iterations = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(50), iterations);
  const double log_eta = 0.5 * (bracket.first + bracket.second);
  Calibration c;
  c.eta = std::exp(log_eta);
  c.mean_theta_deg = mean_theta(log_eta);
  c.samples = static_cast<int>(samples.size());
  if (std::abs(c.mean_theta_deg - target_deg) > 0.01) {
    throw NumericalError("calibration failed: root find did not reach 0.01 degree tolerance");
  }
  return c;
}

DetectorEnergies detector_energies(const PulseSample& s, double basis_deg, double transmission_h,
                                   double transmission_v) {
  if (!(transmission_h > 0.0) || !(transmission_v > 0.0)) {
    throw std::invalid_argument("detector_energies: transmissions must be positive");
  }
  return {transmission_h * std::max(0.0, s.energy_along(basis_deg + 90.0)),
          transmission_v * std::max(0.0, s.energy_along(basis_deg))};
}

DigitizedReading apply_digitizer(const DetectorEnergies& e, const DigitizerConfig& cfg,
                                 std::uint64_t seed) {
  cfg.validate();
  DigitizedReading r{e.e_h, e.e_v, true};
  if (cfg.sigma > 0.0) {
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, cfg.sigma);
    r.e_h += gauss(rng);
    r.e_v += gauss(rng);
  }
  auto inside = [&](double x) { return x >= cfg.floor && x <= cfg.ceiling; };
  r.measurable = inside(r.e_h) && inside(r.e_v);
  return r;
}

namespace {

// P(both components inside the window | θ) for Exponential(mu) energy.
double acceptance(double theta_deg, const DigitizerConfig& cfg, double mu) {
  const double s2 = std::pow(std::sin(theta_deg * kDeg), 2);
  const double c2 = std::pow(std::cos(theta_deg * kDeg), 2);
  if (cfg.sigma == 0.0) {
    const double small = std::min(s2, c2), large = std::max(s2, c2);
    const double lo = small > 0.0 ? cfg.floor / small : (cfg.floor > 0.0 ? INFINITY : 0.0);
    const double hi = cfg.ceiling / large;
    if (!(lo < hi)) return 0.0;
    return std::exp(-lo / mu) - (std::isinf(hi) ? 0.0 : std::exp(-hi / mu));
  }
  const double r = 1.0 / (cfg.sigma * std::numbers::sqrt2);
  auto window = [&](double x) {
    return 0.5 * (std::erfc((cfg.floor - x) * r) - std::erfc((cfg.ceiling - x) * r));
  };
  auto integrand = [&](double energy) {
    return std::exp(-energy / mu) / mu * window(energy * s2) * window(energy * c2);
  };
  // Cut the energy axis around each window edge so every piece is smooth on
  // its own scale; the edges can be far sharper than the exponential.
  std::vector<double> cuts{0.0};
  for (double edge : {cfg.floor, cfg.ceiling}) {
    if (!std::isfinite(edge)) continue;
    for (double share : {s2, c2}) {
      if (share <= 0.0) continue;
      const double centre = edge / share, width = 10.0 * cfg.sigma / share;
      for (double c : {centre - width, centre, centre + width})
        if (c > 0.0) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const double tail = cuts.back() + 50.0 * mu;
  cuts.push_back(tail);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1],
                                                                           10, 1e-11);
  }
  return total;
}

double normalization(const DigitizerConfig& cfg, double mu) {
  auto f = [&](double t) { return acceptance(t, cfg, mu); };
  // The acceptance is symmetric about 45°; integrate one half.
  const double half =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 45.0, 15, 1e-11);
  if (!(half > 0.0)) throw NumericalError("expected density: digitizer window rejects every pulse");
  return 2.0 * half;
}

void check_inputs(const DigitizerConfig& cfg, double energy_scale) {
  cfg.validate();
  if (!(energy_scale > 0.0)) throw std::invalid_argument("expected density: energy scale must be positive");
}

}  // namespace

std::vector<double> expected_measured_density(std::span<const double> theta_deg,
                                              const DigitizerConfig& cfg, double energy_scale) {
  check_inputs(cfg, energy_scale);
  const double norm = normalization(cfg, energy_scale);
  std::vector<double> out;
  out.reserve(theta_deg.size());
  for (double t : theta_deg) {
    if (!(t >= 0.0 && t <= 90.0)) throw std::invalid_argument("expected density: theta outside [0, 90]");
    out.push_back(acceptance(t, cfg, energy_scale) / norm);
  }
  return out;
}

std::vector<double> expected_bin_probabilities(std::span<const double> edges_deg,
                                               const DigitizerConfig& cfg, double energy_scale) {
  check_inputs(cfg, energy_scale);
  if (edges_deg.size() < 2) throw std::invalid_argument("expected bins: need at least two edges");
  const double norm = normalization(cfg, energy_scale);
  auto f = [&](double t) { return acceptance(t, cfg, energy_scale); };
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < edges_deg.size(); ++i) {
    if (!(edges_deg[i] < edges_deg[i + 1]) || edges_deg[i] < 0.0 || edges_deg[i + 1] > 90.0) {
      throw std::invalid_argument("expected bins: edges must increase within [0, 90]");
    }
    out.push_back(boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                      f, edges_deg[i], edges_deg[i + 1], 10, 1e-11) /
                  norm);
  }
  return out;
}

}  // namespace ramanpol
