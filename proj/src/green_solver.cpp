#include "ramanpol/solvers.hpp"
#include "ramanpol/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace ramanpol {

namespace {

// exp(x - damping) I0(x) without forming the overflowing I0(x) alone.
double amplified(double x, double damping) {
  return std::exp(x - damping) * bessel_i0_scaled(x);
}

std::size_t row_offset(int n, int nz) {
  return static_cast<std::size_t>(nz) * static_cast<std::size_t>(n) * (n - 1) / 2;
}

}  // namespace

GreenPropagator::GreenPropagator(const SimulationSetup& setup) : setup_(setup) {
  setup_.validate();
  coupling_ = transverse_coupling(setup_.tensors, setup_.pump.polarization);
  const auto g2 = coupling_.gain();
  if (!coupling_.isotropic(1e-9 * (g2[0][0] + g2[1][1] + 1e-300), &lambda_)) {
    throw std::invalid_argument(
        "Green's-function solver needs isotropic transverse gain (pump along [-110] for "
        "[110] propagation); use the finite-difference solver for this geometry");
  }

  const SimGrid& g = setup_.grid;
  const int nz = g.n_z, nt = g.n_tau;
  const double dt = g.dtau(), dz = g.dz(), gamma = setup_.noise.gamma;
  const double h = gamma * dt;
  weight_ = dt * std::sqrt(-std::expm1(-2.0 * h) / (2.0 * h));

  cumulative_.assign(2 * nt + 1, 0.0);
  for (int i = 1; i <= 2 * nt; ++i) {
    cumulative_[i] =
        cumulative_[i - 1] + pump_integral(setup_.pump, 0.5 * (i - 1) * dt, 0.5 * i * dt);
  }

  std::vector<double> distance(nz);
  for (int j = 0; j < nz; ++j) distance[j] = g.length - (j + 0.5) * dz;

  table_.assign(row_offset(nt + 1, nz), 0.0);
  initial_table_.assign(static_cast<std::size_t>(nt + 1) * nz, 0.0);
  for (int n = 0; n <= nt; ++n) {
    const double a0 = lambda_ * cumulative_[2 * n];
    for (int j = 0; j < nz; ++j) {
      initial_table_[static_cast<std::size_t>(n) * nz + j] =
          amplified(2.0 * std::sqrt(a0 * distance[j]), gamma * n * dt);
    }
    double* row = table_.data() + row_offset(n, nz);
    for (int k = 0; k < n; ++k) {
      const double a = lambda_ * (cumulative_[2 * n] - cumulative_[2 * k + 1]);
      const double damping = gamma * (n - k - 1) * dt;
      for (int j = 0; j < nz; ++j) {
        row[static_cast<std::size_t>(k) * nz + j] = amplified(2.0 * std::sqrt(a * distance[j]), damping);
      }
    }
  }
}

FieldRealization GreenPropagator::propagate(const NoiseRealization& noise) const {
  const SimGrid& g = setup_.grid;
  if (noise.grid.n_z != g.n_z || noise.grid.n_tau != g.n_tau) {
    throw std::invalid_argument("GreenPropagator: noise grid does not match setup grid");
  }
  const int nz = g.n_z, nt = g.n_tau;
  const double dz = g.dz(), dt = g.dtau();

  // Transverse drive Σ_m v_m F_m per cell, [tau][z].
  std::vector<Jones> drive(static_cast<std::size_t>(nt) * nz);
  for (std::size_t cell = 0; cell < drive.size(); ++cell) {
    const cplx* f = &noise.forces[cell * 3];
    Jones d{};
    for (int m = 0; m < 3; ++m) {
      d[0] += coupling_.v[m][0] * f[m];
      d[1] += coupling_.v[m][1] * f[m];
    }
    drive[cell] = d;
  }
  std::vector<Jones> initial(nz);
  for (int j = 0; j < nz; ++j) {
    Jones d{};
    for (int m = 0; m < 3; ++m) {
      d[0] += coupling_.v[m][0] * noise.initial_amplitude(m, j);
      d[1] += coupling_.v[m][1] * noise.initial_amplitude(m, j);
    }
    initial[j] = d;
  }

  FieldRealization out;
  out.grid = g;
  out.output.assign(nt + 1, Jones{});
  const double sqrt_gain = std::sqrt(setup_.pump.gain_scale);
  const cplx i_unit(0.0, 1.0);
  for (int n = 0; n <= nt; ++n) {
    cplx sx = 0.0, sy = 0.0;
    const double* k0 = initial_table_.data() + static_cast<std::size_t>(n) * nz;
    for (int j = 0; j < nz; ++j) {
      sx += k0[j] * initial[j][0];
      sy += k0[j] * initial[j][1];
    }
    cplx fx = 0.0, fy = 0.0;
    const double* row = table_.data() + row_offset(n, nz);
    const std::size_t count = static_cast<std::size_t>(n) * nz;
    for (std::size_t i = 0; i < count; ++i) {
      fx += row[i] * drive[i][0];
      fy += row[i] * drive[i][1];
    }
    const cplx coef = -i_unit * sqrt_gain * setup_.pump.envelope(n * dt) * dz;
    out.output[n] = {coef * (sx + weight_ * fx), coef * (sy + weight_ * fy)};
  }
  return out;
}

std::vector<double> GreenPropagator::component_intensity(bool amplified_kernel) const {
  const SimGrid& g = setup_.grid;
  const int nz = g.n_z, nt = g.n_tau;
  const double dz = g.dz(), dt = g.dtau(), gamma = setup_.noise.gamma;
  const double var_force = 2.0 * gamma / (setup_.noise.rho * dz * dt);
  const double var_initial = setup_.noise.initial_variance_scale / (setup_.noise.rho * dz);

  std::vector<double> out(nt + 1, 0.0);
  for (int n = 0; n <= nt; ++n) {
    double s0 = 0.0, s = 0.0;
    if (amplified_kernel) {
      const double* k0 = initial_table_.data() + static_cast<std::size_t>(n) * nz;
      for (int j = 0; j < nz; ++j) s0 += k0[j] * k0[j];
      const double* row = table_.data() + row_offset(n, nz);
      const std::size_t count = static_cast<std::size_t>(n) * nz;
      for (std::size_t i = 0; i < count; ++i) s += row[i] * row[i];
    } else {
      s0 = nz * std::exp(-2.0 * gamma * n * dt);
      for (int k = 0; k < n; ++k) s += nz * std::exp(-2.0 * gamma * (n - k - 1) * dt);
    }
    const double env = std::norm(setup_.pump.envelope(n * dt));
    out[n] = setup_.pump.gain_scale * env * lambda_ * dz * dz *
             (var_initial * s0 + weight_ * weight_ * var_force * s);
  }
  return out;
}

double GreenPropagator::component_energy(bool amplified_kernel) const {
  const auto intensity = component_intensity(amplified_kernel);
  const double dt = setup_.grid.dtau();
  double e = 0.0;
  for (std::size_t k = 0; k < intensity.size(); ++k) {
    e += (k == 0 || k + 1 == intensity.size() ? 0.5 : 1.0) * dt * intensity[k];
  }
  return e;
}

FieldRealization analytic_realization(const SimulationSetup& setup, const NoiseRealization& noise) {
  return GreenPropagator(setup).propagate(noise);
}

}  // namespace ramanpol
