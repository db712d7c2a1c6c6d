#include "ramanpol/noise.hpp"

#include "ramanpol/rng.hpp"

#include <cmath>
#include <random>

namespace ramanpol {

double NoiseRealization::force_variance() const {
  return 2.0 * params.gamma / (params.rho * grid.dz() * grid.dtau());
}

double NoiseRealization::initial_variance() const {
  return params.initial_variance_scale / (params.rho * grid.dz());
}

void NoiseRealization::scale(double factor) {
  for (auto& f : forces) f *= factor;
  for (auto& q : initial) q *= factor;
}

namespace {

template <class Fill>
void fill(std::vector<cplx>& out, std::size_t count, double variance, NoiseQuadrature quadrature,
          Fill&& normal) {
  out.resize(count);
  if (quadrature == NoiseQuadrature::kInPhase) {
    const double sigma = std::sqrt(variance);
    for (auto& v : out) v = cplx(sigma * normal(), 0.0);
  } else {
    const double sigma = std::sqrt(0.5 * variance);
    for (auto& v : out) {
      const double re = normal();
      v = cplx(sigma * re, sigma * normal());
    }
  }
}

}  // namespace

void sample_noise_into(NoiseRealization& out, const SimGrid& grid, const NoiseParams& params,
                       std::uint64_t seed) {
  grid.validate();
  params.validate();
  out.grid = grid;
  out.params = params;
  out.seed = seed;

  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto normal = [&] { return gauss(rng); };

  const std::size_t cells = static_cast<std::size_t>(grid.n_tau) * grid.n_z * 3;
  fill(out.initial, static_cast<std::size_t>(grid.n_z) * 3, out.initial_variance(),
       params.quadrature, normal);
  fill(out.forces, cells, out.force_variance(), params.quadrature, normal);
}

NoiseRealization sample_noise(const SimGrid& grid, const NoiseParams& params, std::uint64_t seed) {
  NoiseRealization out;
  sample_noise_into(out, grid, params, seed);
  return out;
}

NoiseRealization zero_noise(const SimGrid& grid, const NoiseParams& params) {
  grid.validate();
  params.validate();
  NoiseRealization out;
  out.grid = grid;
  out.params = params;
  out.forces.assign(static_cast<std::size_t>(grid.n_tau) * grid.n_z * 3, cplx{});
  out.initial.assign(static_cast<std::size_t>(grid.n_z) * 3, cplx{});
  return out;
}

}  // namespace ramanpol
