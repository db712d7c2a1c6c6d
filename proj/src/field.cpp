#include "ramanpol/field.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace ramanpol {

double PulseSample::energy_along(double angle_deg) const {
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  return e_x * c * c + e_y * s * s + 2.0 * cross * c * s;
}

double PulseSample::principal_energy() const {
  return 0.5 * (energy + std::hypot(e_x - e_y, 2.0 * std::hypot(cross, cross_imag)));
}

PulseSample realization_to_sample(const FieldRealization& f) {
  const int n = static_cast<int>(f.output.size());
  if (n < 2) throw std::invalid_argument("realization_to_sample: field has no output plane");
  const double dtau = f.grid.dtau();
  double jxx = 0.0, jyy = 0.0;
  cplx jxy = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = (k == 0 || k == n - 1) ? 0.5 * dtau : dtau;
    const Jones& e = f.output[k];
    jxx += w * std::norm(e[0]);
    jyy += w * std::norm(e[1]);
    jxy += w * e[0] * std::conj(e[1]);
  }
  PulseSample s;
  s.e_x = jxx;
  s.e_y = jyy;
  s.cross = jxy.real();
  s.cross_imag = jxy.imag();
  s.energy = jxx + jyy;
  if (!(s.energy > 0.0)) return s;  // undefined orientation: flagged invalid
  s.valid = true;
  s.dop = std::min(1.0, std::sqrt((jxx - jyy) * (jxx - jyy) + 4.0 * std::norm(jxy)) / s.energy);
  double axis = 0.5 * std::atan2(2.0 * jxy.real(), jxx - jyy) * 180.0 / std::numbers::pi;
  if (axis < 0.0) axis += 180.0;
  if (axis >= 180.0) axis -= 180.0;
  s.theta_true_deg = axis;
  return s;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "field dumps are written in native order and assume a little-endian host");

template <class T>
void put(std::ofstream& out, T value) {
  static_assert(sizeof(T) == 8);
  out.write(reinterpret_cast<const char*>(&value), 8);
}

template <class T>
T get(std::ifstream& in) {
  static_assert(sizeof(T) == 8);
  T value;
  in.read(reinterpret_cast<char*>(&value), 8);
  if (!in) throw std::runtime_error("field dump truncated");
  return value;
}

}  // namespace

void write_field_dump(const std::filesystem::path& path, const FieldRealization& f,
                      const NoiseParams& params, std::uint64_t seed) {
  if (!f.has_interior()) {
    throw std::invalid_argument("write_field_dump: realization has no interior grids");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  put<std::uint64_t>(out, static_cast<std::uint64_t>(f.grid.n_z));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(f.grid.n_tau));
  put<double>(out, params.gamma);
  put<double>(out, params.rho);
  put<std::uint64_t>(out, seed);
  for (const Jones& e : f.stokes)
    for (const cplx& c : e) {
      put<double>(out, c.real());
      put<double>(out, c.imag());
    }
  for (const ModeVector& q : f.vibrations)
    for (const cplx& c : q) {
      put<double>(out, c.real());
      put<double>(out, c.imag());
    }
}

FieldDump read_field_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  FieldDump d;
  d.n_z = get<std::uint64_t>(in);
  d.n_tau = get<std::uint64_t>(in);
  d.gamma = get<double>(in);
  d.rho = get<double>(in);
  d.seed = get<std::uint64_t>(in);
  const std::size_t stokes = (d.n_z + 1) * (d.n_tau + 1) * 2;
  const std::size_t vib = d.n_z * (d.n_tau + 1) * 3;
  d.stokes.resize(stokes);
  d.vibrations.resize(vib);
  for (auto& c : d.stokes) {
    const double re = get<double>(in);
    c = cplx(re, get<double>(in));
  }
  for (auto& c : d.vibrations) {
    const double re = get<double>(in);
    c = cplx(re, get<double>(in));
  }
  return d;
}

}  // namespace ramanpol
