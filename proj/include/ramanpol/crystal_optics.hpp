#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <vector>

namespace ramanpol {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Proper orthogonal change of basis. Rows of the matrix are the new axes
/// expressed in the old coordinates, so `v_new = matrix() * v_old` and a
/// rank-2 tensor transforms as `R K Rᵀ`.
class BasisRotation {
 public:
  BasisRotation() : m_(Mat3::Identity()) {}
  /// Rejects matrices with |RᵀR - I| > 1e-12 or det R != +1.
  explicit BasisRotation(const Mat3& m);

  /// New axes given in old coordinates; vectors are normalized first.
  static BasisRotation from_axes(const Vec3& x, const Vec3& y, const Vec3& z);

  /// Coordinates in a frame obtained by turning the current axes by `angle`
  /// (right-handed) about `axis`.
  static BasisRotation frame_turned_about(const Vec3& axis, double angle);

  const Mat3& matrix() const { return m_; }
  Vec3 apply(const Vec3& v) const { return m_ * v; }

  /// Composition: first `*this`, then `next` (expressed in the new frame).
  BasisRotation then(const BasisRotation& next) const;

 private:
  Mat3 m_;
};

/// The F2g triplet, three symmetric traceless 3x3 polarizability tensors of
/// common Frobenius norm d·√2.
class RamanTensorSet {
 public:
  RamanTensorSet(const std::array<Mat3, 3>& tensors, double d);

  const Mat3& operator[](std::size_t n) const { return tensors_[n]; }
  const std::array<Mat3, 3>& tensors() const { return tensors_; }
  double magnitude() const { return d_; }

  /// Relabels the modes; `order[i]` is the source index of new mode i. Mode
  /// relabeling is an orthogonal mixing within the degenerate subspace and
  /// leaves every Σ_n κ_n ⊗ κ_n contraction unchanged.
  RamanTensorSet permuted(const std::array<int, 3>& order) const;

  /// Σ_n κ_n κ_nᵀ.
  Mat3 outer_sum() const;

 private:
  std::array<Mat3, 3> tensors_;
  double d_;
};

/// Cubic-axis F2g forms: tensor 0 couples (y,z), tensor 1 (x,z), tensor 2 (x,y).
RamanTensorSet f2g_tensors(double d = 1.0);

RamanTensorSet rotate_tensor_set(const RamanTensorSet& t, const BasisRotation& r);

/// 45° about [001] followed by 90° about the intermediate y-axis. Leaves
/// x = [00-1], y = [-110]/√2 and z = [110]/√2.
BasisRotation rotated_110_basis();

/// Laboratory frame used by the simulator: z along `propagation`, x along the
/// component of `reference` orthogonal to it, y = z × x. Both arguments are
/// crystal (cubic) directions, e.g. Miller indices.
BasisRotation lab_basis(const Vec3& propagation, const Vec3& reference);

/// Default laboratory frame: propagation [110], x = [-110], y = [001].
BasisRotation lab_basis_110();

/// Mode-coupling structure for one pump polarization p.
///
/// `modes` is the 3x3 mode-space matrix M_nm = (κ_n p)·(κ_m p) / d², the
/// geometric part of the coupled-mode system without the C|E_p|²/s factor.
/// `coupling` holds the vectors κ_n p / d as columns, so that
/// modes = couplingᵀ coupling and spatial() = coupling couplingᵀ.
struct GainMatrix {
  Mat3 modes;
  Mat3 coupling;

  Mat3 spatial() const { return coupling * coupling.transpose(); }
};

/// Rejects a zero or non-unit (|1 - |p|| > 1e-9) polarization.
GainMatrix build_gain_matrix(const RamanTensorSet& t, const Vec3& pump_pol);

/// Transverse plane of a propagation direction with an in-plane reference
/// axis. Angle ψ runs from `reference` towards `propagation × reference`.
struct TransverseFrame {
  Vec3 reference = Vec3::UnitX();
  Vec3 propagation = Vec3::UnitZ();

  Vec3 direction(double psi) const;
};

/// Small-signal gain for a Stokes field polarized at ψ:
/// g(ψ) = Σ_n (ê(ψ)·κ_n p)² / d².
std::vector<double> transverse_gain_profile(const GainMatrix& m,
                                            std::span<const double> angles,
                                            const TransverseFrame& frame = {});

/// Principal axis of the transverse gain in [0, π), measured in `frame`, and
/// the two transverse eigenvalues (largest first).
struct TransverseGainAxes {
  double max_axis;
  double gain_max;
  double gain_min;
};
TransverseGainAxes transverse_gain_axes(const GainMatrix& m, const TransverseFrame& frame = {});

}  // namespace ramanpol
