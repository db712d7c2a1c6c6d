#include "ramanpol/crystal_optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ramanpol {

namespace {

constexpr double kOrthoTol = 1e-12;

void check_tensor(const Mat3& k, double d, int index) {
  const double tol = 1e-9 * d;
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("Raman tensor " + std::to_string(index) + " is not symmetric");
  }
  if (std::abs(k.trace()) > tol) {
    throw std::invalid_argument("Raman tensor " + std::to_string(index) + " is not traceless");
  }
}

}  // namespace

BasisRotation::BasisRotation(const Mat3& m) : m_(m) {
  const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!(ortho <= kOrthoTol)) {
    throw std::invalid_argument("basis rotation is not orthogonal (max |RᵀR - I| = " +
                                std::to_string(ortho) + ")");
  }
  if (std::abs(m.determinant() - 1.0) > kOrthoTol) {
    throw std::invalid_argument("basis rotation must have determinant +1");
  }
}

BasisRotation BasisRotation::from_axes(const Vec3& x, const Vec3& y, const Vec3& z) {
  Mat3 m;
  m.row(0) = x.normalized().transpose();
  m.row(1) = y.normalized().transpose();
  m.row(2) = z.normalized().transpose();
  return BasisRotation(m);
}

BasisRotation BasisRotation::frame_turned_about(const Vec3& axis, double angle) {
  if (axis.norm() == 0.0) throw std::invalid_argument("rotation axis must be non-zero");
  const Mat3 turned = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  Mat3 m = turned.transpose();
  // Clean up rounding so that exact axes stay exact (cos 90° etc.).
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(m(i, j)) < 1e-15) m(i, j) = 0.0;
  return BasisRotation(m);
}

BasisRotation BasisRotation::then(const BasisRotation& next) const {
  return BasisRotation(next.m_ * m_);
}

RamanTensorSet::RamanTensorSet(const std::array<Mat3, 3>& tensors, double d)
    : tensors_(tensors), d_(d) {
  if (!(d > 0.0)) throw std::invalid_argument("Raman polarizability magnitude must be positive");
  const double norm0 = tensors_[0].norm();
  for (int n = 0; n < 3; ++n) {
    check_tensor(tensors_[n], d, n);
    if (std::abs(tensors_[n].norm() - norm0) > 1e-9 * d) {
      throw std::invalid_argument("Raman tensors must share a common Frobenius norm");
    }
  }
}

RamanTensorSet RamanTensorSet::permuted(const std::array<int, 3>& order) const {
  std::array<Mat3, 3> out;
  std::array<bool, 3> used{};
  for (int i = 0; i < 3; ++i) {
    const int src = order[i];
    if (src < 0 || src > 2 || used[src]) throw std::invalid_argument("invalid mode permutation");
    used[src] = true;
    out[i] = tensors_[src];
  }
  return RamanTensorSet(out, d_);
}

Mat3 RamanTensorSet::outer_sum() const {
  Mat3 s = Mat3::Zero();
  for (const auto& k : tensors_) s += k * k.transpose();
  return s;
}

RamanTensorSet f2g_tensors(double d) {
  if (!(d > 0.0)) throw std::invalid_argument("f2g_tensors: d must be positive");
  std::array<Mat3, 3> t;
  for (auto& k : t) k.setZero();
  t[0](1, 2) = t[0](2, 1) = d;
  t[1](0, 2) = t[1](2, 0) = d;
  t[2](0, 1) = t[2](1, 0) = d;
  return RamanTensorSet(t, d);
}

RamanTensorSet rotate_tensor_set(const RamanTensorSet& t, const BasisRotation& r) {
  const Mat3& m = r.matrix();
  std::array<Mat3, 3> out;
  for (int n = 0; n < 3; ++n) {
    out[n] = m * t[n] * m.transpose();
    // Symmetrize away rounding noise; the exact result is symmetric.
    out[n] = 0.5 * (out[n] + out[n].transpose()).eval();
  }
  return RamanTensorSet(out, t.magnitude());
}

BasisRotation rotated_110_basis() {
  const double quarter = std::numbers::pi / 4.0;
  const double half = std::numbers::pi / 2.0;
  return BasisRotation::frame_turned_about(Vec3::UnitZ(), quarter)
      .then(BasisRotation::frame_turned_about(Vec3::UnitY(), half));
}

BasisRotation lab_basis(const Vec3& propagation, const Vec3& reference) {
  if (propagation.norm() == 0.0 || reference.norm() == 0.0) {
    throw std::invalid_argument("lab_basis: directions must be non-zero");
  }
  const Vec3 z = propagation.normalized();
  const Vec3 x_raw = reference - reference.dot(z) * z;
  if (x_raw.norm() < 1e-9 * reference.norm()) {
    throw std::invalid_argument("lab_basis: reference axis is parallel to propagation");
  }
  const Vec3 x = x_raw.normalized();
  return BasisRotation::from_axes(x, z.cross(x), z);
}

BasisRotation lab_basis_110() { return lab_basis(Vec3(1, 1, 0), Vec3(-1, 1, 0)); }

GainMatrix build_gain_matrix(const RamanTensorSet& t, const Vec3& pump_pol) {
  const double norm = pump_pol.norm();
  if (norm == 0.0) throw std::invalid_argument("build_gain_matrix: zero pump polarization");
  if (std::abs(norm - 1.0) > 1e-9) {
    throw std::invalid_argument("build_gain_matrix: pump polarization must be a unit vector");
  }
  GainMatrix g;
  for (int n = 0; n < 3; ++n) g.coupling.col(n) = t[n] * pump_pol / t.magnitude();
  g.modes = g.coupling.transpose() * g.coupling;
  return g;
}

Vec3 TransverseFrame::direction(double psi) const {
  const Vec3 z = propagation.normalized();
  const Vec3 u = (reference - reference.dot(z) * z).normalized();
  return std::cos(psi) * u + std::sin(psi) * z.cross(u);
}

std::vector<double> transverse_gain_profile(const GainMatrix& m, std::span<const double> angles,
                                            const TransverseFrame& frame) {
  std::vector<double> out;
  out.reserve(angles.size());
  for (double psi : angles) {
    const Vec3 e = frame.direction(psi);
    out.push_back((m.coupling.transpose() * e).squaredNorm());
  }
  return out;
}

TransverseGainAxes transverse_gain_axes(const GainMatrix& m, const TransverseFrame& frame) {
  const Vec3 u = frame.direction(0.0);
  const Vec3 w = frame.direction(std::numbers::pi / 2.0);
  const Mat3 s = m.spatial();
  const double guu = u.dot(s * u), gww = w.dot(s * w), guw = u.dot(s * w);
  const double mean = 0.5 * (guu + gww);
  const double radius = std::hypot(0.5 * (guu - gww), guw);
  double axis = 0.5 * std::atan2(2.0 * guw, guu - gww);
  if (axis < 0.0) axis += std::numbers::pi;
  if (axis >= std::numbers::pi) axis -= std::numbers::pi;
  return {axis, mean + radius, mean - radius};
}

}  // namespace ramanpol
