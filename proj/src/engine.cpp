#include "ramanpol/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace ramanpol {

void SimGrid::validate() const {
  if (n_z < 2 || n_tau < 2) throw std::invalid_argument("grid needs n_z >= 2 and n_tau >= 2");
  if (!(length > 0.0) || !(window > 0.0) || !std::isfinite(length) || !std::isfinite(window)) {
    throw std::invalid_argument("grid length and window must be positive and finite");
  }
}

void NoiseParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("damping rate gamma must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("linear density rho must be positive");
  if (!(initial_variance_scale >= 0.0)) {
    throw std::invalid_argument("initial variance scale must be non-negative");
  }
}

void SimulationSetup::validate() const {
  grid.validate();
  noise.validate();
  pump.validate();
}

std::array<std::array<double, 2>, 2> TransverseCoupling::gain() const {
  std::array<std::array<double, 2>, 2> g{};
  for (const auto& vn : v)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) g[a][b] += vn[a] * vn[b];
  return g;
}

bool TransverseCoupling::isotropic(double tol, double* lambda) const {
  const auto g = gain();
  const double mean = 0.5 * (g[0][0] + g[1][1]);
  if (lambda) *lambda = mean;
  return std::abs(g[0][0] - g[1][1]) <= tol && std::abs(g[0][1]) <= tol;
}

TransverseCoupling transverse_coupling(const RamanTensorSet& tensors, const Vec3& pump_pol) {
  const GainMatrix m = build_gain_matrix(tensors, pump_pol);
  TransverseCoupling c;
  for (int n = 0; n < 3; ++n) c.v[n] = {m.coupling(0, n), m.coupling(1, n)};
  return c;
}

}  // namespace ramanpol
