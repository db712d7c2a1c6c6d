#include "ramanpol/errors.hpp"
#include "ramanpol/solvers.hpp"

#include <cmath>
#include <sstream>

namespace ramanpol {

namespace {

constexpr double kResolutionLimit = 0.1;
constexpr double kSlack = 1e-9;

}  // namespace

void check_fd_resolution(const SimulationSetup& setup) {
  setup.validate();
  const SimGrid& g = setup.grid;
  const double gamma_step = setup.noise.gamma * g.dtau();
  if (gamma_step > kResolutionLimit + kSlack) {
    std::ostringstream msg;
    msg << "grid under-resolves damping: gamma*dtau = " << gamma_step << " > 0.1; increase n_tau";
    throw NumericalError(msg.str());
  }
  const double a_total = pump_integral(setup.pump, 0.0, g.window);
  if (a_total * g.dz() > kResolutionLimit + kSlack) {
    std::ostringstream msg;
    msg << "grid under-resolves gain in z: a(window,0)*dz = " << a_total * g.dz()
        << " > 0.1; increase n_z to at least " << std::ceil(a_total * g.length / kResolutionLimit);
    throw NumericalError(msg.str());
  }
  double worst = 0.0;
  for (int k = 0; k < g.n_tau; ++k) {
    worst = std::max(worst, pump_integral(setup.pump, k * g.dtau(), (k + 1) * g.dtau()));
  }
  if (worst * g.length > kResolutionLimit + kSlack) {
    std::ostringstream msg;
    msg << "grid under-resolves gain in tau: max step a*length = " << worst * g.length
        << " > 0.1; increase n_tau";
    throw NumericalError(msg.str());
  }
}

FieldRealization propagate_fd(const SimulationSetup& setup, const NoiseRealization& noise,
                              const FdOptions& options) {
  check_fd_resolution(setup);
  const SimGrid& g = setup.grid;
  if (noise.grid.n_z != g.n_z || noise.grid.n_tau != g.n_tau) {
    throw std::invalid_argument("propagate_fd: noise grid does not match setup grid");
  }
  const int nz = g.n_z, nt = g.n_tau;
  const double dz = g.dz(), dt = g.dtau();
  const TransverseCoupling c = transverse_coupling(setup.tensors, setup.pump.polarization);
  const double sqrt_gain = std::sqrt(setup.pump.gain_scale);

  const double h = setup.noise.gamma * dt;
  const double decay = std::exp(-h);
  const double phi1 = -std::expm1(-h) / h;
  const double phi2 = h > 1e-4 ? (h - 1.0 + decay) / (h * h) : 0.5 - h / 6.0 + h * h / 24.0;
  // Exact OU increment over one step for a cell-averaged force sample.
  const double weight = dt * std::sqrt(-std::expm1(-2.0 * h) / (2.0 * h));

  FieldRealization out;
  out.grid = g;
  out.output.assign(nt + 1, Jones{});
  if (options.record_interior) {
    out.stokes.assign(static_cast<std::size_t>(nz + 1) * (nt + 1), Jones{});
    out.vibrations.assign(static_cast<std::size_t>(nz) * (nt + 1), ModeVector{});
  }

  std::vector<ModeVector> q(nz), q_star(nz), d0(nz), d1(nz);
  for (int j = 0; j < nz; ++j)
    for (int m = 0; m < 3; ++m) q[j][m] = noise.initial_amplitude(m, j);

  const cplx i_unit(0.0, 1.0);
  // Integrates E_S across z at time `tau` for vibrations `qv`, filling the
  // drive term i√g ε* (v_n·E_S) at each cell centre. Returns E_S(L).
  auto march = [&](int tau_node, const std::vector<ModeVector>& qv, std::vector<ModeVector>& drive,
                   bool record) {
    const cplx amp = sqrt_gain * setup.pump.envelope(tau_node * dt);
    const cplx field_coef = -i_unit * amp * dz;
    const cplx drive_coef = i_unit * std::conj(amp);
    Jones e{};
    if (record) out.stokes[static_cast<std::size_t>(0) * (nt + 1) + tau_node] = e;
    for (int j = 0; j < nz; ++j) {
      const ModeVector& qj = qv[j];
      Jones source{};
      for (int m = 0; m < 3; ++m) {
        source[0] += c.v[m][0] * qj[m];
        source[1] += c.v[m][1] * qj[m];
      }
      const Jones next{e[0] + field_coef * source[0], e[1] + field_coef * source[1]};
      const Jones mid{0.5 * (e[0] + next[0]), 0.5 * (e[1] + next[1])};
      for (int m = 0; m < 3; ++m) {
        drive[j][m] = drive_coef * (c.v[m][0] * mid[0] + c.v[m][1] * mid[1]);
      }
      e = next;
      if (record) out.stokes[static_cast<std::size_t>(j + 1) * (nt + 1) + tau_node] = e;
    }
    return e;
  };

  auto guard = [&](const Jones& e, int k) {
    const double p = std::norm(e[0]) + std::norm(e[1]);
    if (!std::isfinite(p) || p > options.overflow_guard) {
      std::ostringstream msg;
      msg << "finite-difference march unstable at tau step " << k << " (|E|^2 = " << p << ")";
      throw NumericalError(msg.str());
    }
  };

  const bool record = options.record_interior;
  for (int k = 0; k < nt; ++k) {
    out.output[k] = march(k, q, d0, record);
    guard(out.output[k], k);
    if (record) {
      for (int j = 0; j < nz; ++j) out.vibrations[static_cast<std::size_t>(j) * (nt + 1) + k] = q[j];
    }
    const cplx* f = &noise.forces[static_cast<std::size_t>(k) * nz * 3];
    for (int j = 0; j < nz; ++j)
      for (int m = 0; m < 3; ++m)
        q_star[j][m] = decay * q[j][m] + (dt * phi1) * d0[j][m] + weight * f[j * 3 + m];
    march(k + 1, q_star, d1, false);
    for (int j = 0; j < nz; ++j)
      for (int m = 0; m < 3; ++m) q[j][m] = q_star[j][m] + (dt * phi2) * (d1[j][m] - d0[j][m]);
  }
  out.output[nt] = march(nt, q, d0, record);
  guard(out.output[nt], nt);
  if (record) {
    for (int j = 0; j < nz; ++j) out.vibrations[static_cast<std::size_t>(j) * (nt + 1) + nt] = q[j];
  }
  return out;
}

}  // namespace ramanpol
