#include "ramanpol/ensemble.hpp"
#include "ramanpol/parallel.hpp"
#include "ramanpol/rng.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>

namespace ramanpol {

FieldRealization solve(const SimulationSetup& setup, const NoiseRealization& noise, Solver solver) {
  if (solver == Solver::kGreen) return analytic_realization(setup, noise);
  return propagate_fd(setup, noise);
}

std::vector<PulseSample> simulate_pulses(const SimulationSetup& setup, std::uint64_t seed,
                                         std::size_t first, std::size_t count, Solver solver,
                                         int threads) {
  setup.validate();
  std::optional<GreenPropagator> green;
  if (solver == Solver::kGreen) {
    green.emplace(setup);
  } else {
    check_fd_resolution(setup);
  }
  std::vector<PulseSample> out(count);
  const int workers = resolve_threads(threads);
  std::vector<NoiseRealization> scratch(workers);
  parallel_for(count, workers, [&](std::size_t i, int w) {
    NoiseRealization& noise = scratch[w];
    sample_noise_into(noise, setup.grid, setup.noise, derive_seed(seed, streams::kNoise, first + i));
    const FieldRealization f = green ? green->propagate(noise) : propagate_fd(setup, noise);
    out[i] = realization_to_sample(f);
  });
  return out;
}

EnsembleIntensity ensemble_intensity(const SimulationSetup& setup, std::span<const double> psi_deg,
                                     int n_realizations, std::uint64_t seed, Solver solver,
                                     int threads) {
  if (n_realizations < 100) {
    throw std::invalid_argument("ensemble_intensity: need at least 100 realizations");
  }
  const auto samples = simulate_pulses(setup, seed, 0, n_realizations, solver, threads);

  EnsembleIntensity r;
  r.psi_deg.assign(psi_deg.begin(), psi_deg.end());
  r.realizations = n_realizations;
  const double n = n_realizations;
  auto moments = [&](auto value, double& mean, double& se) {
    double s = 0.0, s2 = 0.0;
    for (const auto& p : samples) {
      const double v = value(p);
      s += v;
      s2 += v * v;
    }
    mean = s / n;
    const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
    se = std::sqrt(var / n);
  };
  for (double psi : r.psi_deg) {
    double m = 0.0, se = 0.0;
    moments([psi](const PulseSample& p) { return p.energy_along(psi); }, m, se);
    r.mean.push_back(m);
    r.std_error.push_back(se);
  }
  moments([](const PulseSample& p) { return p.energy; }, r.total_mean, r.total_std_error);

  double lambda = 0.0;
  if (transverse_coupling(setup.tensors, setup.pump.polarization).isotropic(1e-9, &lambda)) {
    r.quadrature = GreenPropagator(setup).component_energy();
  } else {
    r.quadrature = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

}  // namespace ramanpol
