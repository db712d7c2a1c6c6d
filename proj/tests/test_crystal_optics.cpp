#include "ramanpol/crystal_optics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ramanpol;

namespace {

constexpr double kPi = std::numbers::pi;

// Tensors of the three modes in the basis with z along [110], written out by
// hand.
std::array<Mat3, 3> literal_rotated_tensors(double d) {
  const double h = d / std::sqrt(2.0);
  Mat3 t1, t2, t3;
  t1 << 0, 0, 0, 0, -d, 0, 0, 0, d;
  t2 << 0, h, -h, h, 0, 0, -h, 0, 0;
  t3 << 0, -h, -h, -h, 0, 0, -h, 0, 0;
  return {t1, t2, t3};
}

// M_ij = Σ_k Σ_l Σ_m κ_kli κ_kmj p_l p_m / d², summed explicitly.
Mat3 gram_by_index_sum(const std::array<Mat3, 3>& kappa, const Vec3& p, double d) {
  Mat3 m = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          for (int n = 0; n < 3; ++n) m(i, j) += kappa[i](k, l) * kappa[j](k, n) * p[l] * p[n];
  return m / (d * d);
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace

TEST(BasisRotation, RejectsNonOrthogonalAndImproper) {
  Mat3 skew = Mat3::Identity();
  skew(0, 1) = 1e-6;
  EXPECT_THROW(BasisRotation{skew}, std::invalid_argument);
  Mat3 mirror = Mat3::Identity();
  mirror(2, 2) = -1.0;
  EXPECT_THROW(BasisRotation{mirror}, std::invalid_argument);
  EXPECT_NO_THROW(BasisRotation{Mat3::Identity()});
}

TEST(BasisRotation, RotatedFrameAxes) {
  const Mat3& r = rotated_110_basis().matrix();
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR((r.row(0).transpose() - Vec3(0, 0, -1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((r.row(1).transpose() - Vec3(-s, s, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((r.row(2).transpose() - Vec3(s, s, 0)).norm(), 0.0, 1e-15);
}

TEST(BasisRotation, LabFrameAxes) {
  const Mat3& r = lab_basis_110().matrix();
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR((r.row(0).transpose() - Vec3(-s, s, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((r.row(1).transpose() - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((r.row(2).transpose() - Vec3(s, s, 0)).norm(), 0.0, 1e-15);
  EXPECT_THROW(lab_basis(Vec3(1, 1, 0), Vec3(2, 2, 0)), std::invalid_argument);
}

TEST(RamanTensors, CubicFormsAreValid) {
  const auto t = f2g_tensors(2.0);
  for (int n = 0; n < 3; ++n) {
    EXPECT_DOUBLE_EQ(t[n].trace(), 0.0);
    EXPECT_DOUBLE_EQ((t[n] - t[n].transpose()).norm(), 0.0);
    EXPECT_NEAR(t[n].norm(), 2.0 * std::sqrt(2.0), 1e-15);
  }
  EXPECT_THROW(f2g_tensors(0.0), std::invalid_argument);
}

TEST(RamanTensors, RejectsBadTensors) {
  auto t = f2g_tensors(1.0).tensors();
  auto asym = t;
  asym[0](0, 1) = 0.3;
  EXPECT_THROW(RamanTensorSet(asym, 1.0), std::invalid_argument);
  auto traced = t;
  traced[1](0, 0) = 0.5;
  EXPECT_THROW(RamanTensorSet(traced, 1.0), std::invalid_argument);
  EXPECT_THROW(f2g_tensors(1.0).permuted({0, 0, 1}), std::invalid_argument);
}

TEST(RamanTensors, RotatedSetMatchesLiteralTensors) {
  for (double d : {1.0, 0.37}) {
    const auto rotated = rotate_tensor_set(f2g_tensors(d), rotated_110_basis()).permuted({2, 1, 0});
    const auto literal = literal_rotated_tensors(d);
    for (int n = 0; n < 3; ++n) EXPECT_LE((rotated[n] - literal[n]).cwiseAbs().maxCoeff(), 1e-12) << n;
  }
}

TEST(GainMatrix, HorizontalPumpMatchesLiteral) {
  const double d = 1.3;
  const auto literal = literal_rotated_tensors(d);
  const RamanTensorSet t(literal, d);
  // [-110] is the rotated-basis y axis.
  const Vec3 p(0, 1, 0);
  Mat3 expected;
  expected << 1, 0, 0, 0, 0.5, -0.5, 0, -0.5, 0.5;
  const GainMatrix g = build_gain_matrix(t, p);
  EXPECT_LE((g.modes - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((gram_by_index_sum(literal, p, d) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GainMatrix, IndexSumOracleForRandomPumps) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const auto t = f2g_tensors(1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 p = Vec3(g(rng), g(rng), g(rng)).normalized();
    EXPECT_LE((build_gain_matrix(t, p).modes - gram_by_index_sum(t.tensors(), p, 1.0)).norm(), 1e-13);
  }
}

TEST(GainMatrix, PositiveSemidefiniteWithFixedTrace) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const auto t = f2g_tensors(1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec3 p = Vec3(g(rng), g(rng), g(rng)).normalized();
    const GainMatrix m = build_gain_matrix(t, p);
    Eigen::SelfAdjointEigenSolver<Mat3> es(m.modes);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    // Σ_n |κ_n p|² = 2|p|² for the cubic triplet.
    EXPECT_NEAR(m.modes.trace(), 2.0, 1e-12);
    EXPECT_LE((m.modes - m.modes.transpose()).norm(), 1e-15);
  }
}

TEST(GainMatrix, InvariantUnderCrystalRotation) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const auto t = f2g_tensors(1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const BasisRotation r(random_rotation(rng));
    const Vec3 p = Vec3(g(rng), g(rng), g(rng)).normalized();
    const GainMatrix a = build_gain_matrix(t, p);
    const GainMatrix b = build_gain_matrix(rotate_tensor_set(t, r), r.apply(p));
    EXPECT_LE((a.modes - b.modes).cwiseAbs().maxCoeff(), 1e-12);
    const Mat3 rotated_spatial = r.matrix() * a.spatial() * r.matrix().transpose();
    EXPECT_LE((rotated_spatial - b.spatial()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(GainMatrix, RejectsNonUnitPump) {
  const auto t = f2g_tensors(1.0);
  EXPECT_THROW(build_gain_matrix(t, Vec3::Zero()), std::invalid_argument);
  EXPECT_THROW(build_gain_matrix(t, Vec3(1, 1, 0)), std::invalid_argument);
}

TEST(TransverseGain, FlatForSymmetricPump) {
  const auto lab = rotate_tensor_set(f2g_tensors(1.0), lab_basis_110());
  const GainMatrix m = build_gain_matrix(lab, Vec3::UnitX());
  std::vector<double> psi;
  for (int k = 0; k < 360; ++k) psi.push_back(k * kPi / 180.0);
  const auto g = transverse_gain_profile(m, psi);
  for (double v : g) EXPECT_NEAR(v, g.front(), 1e-12);
  EXPECT_NEAR(g.front(), 1.0, 1e-12);
}

TEST(TransverseGain, DiagonalPumpIsDeterministicAtMagicAngle) {
  // Pump along [-111] for [110] propagation.
  const BasisRotation lab = lab_basis_110();
  const auto tensors = rotate_tensor_set(f2g_tensors(1.0), lab);
  const Vec3 p = lab.apply(Vec3(-1, 1, 1).normalized());
  EXPECT_NEAR(p.z(), 0.0, 1e-15);
  const auto axes = transverse_gain_axes(build_gain_matrix(tensors, p));
  EXPECT_NEAR(axes.max_axis * 180.0 / kPi, std::atan(1.0 / std::sqrt(2.0)) * 180.0 / kPi, 1e-9);
  EXPECT_NEAR(axes.max_axis * 180.0 / kPi, 35.26438968, 1e-6);
  EXPECT_NEAR(axes.gain_max, 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(axes.gain_min, 1.0 / 3.0, 1e-12);
}

TEST(TransverseGain, SmallPumpOffsetsBreakIsotropyProgressively) {
  const auto tensors = rotate_tensor_set(f2g_tensors(1.0), lab_basis_110());
  double previous = 0.0;
  for (double deg : {1.0, 2.0, 5.0}) {
    const double a = deg * kPi / 180.0;
    const auto axes = transverse_gain_axes(build_gain_matrix(tensors, Vec3(std::cos(a), std::sin(a), 0)));
    EXPECT_GT(axes.gain_max - axes.gain_min, previous);
    previous = axes.gain_max - axes.gain_min;
    // Axis sits just below 45° and moves away with the offset.
    EXPECT_LT(axes.max_axis * 180.0 / kPi, 45.0);
  }
  const double a = 5.0 * kPi / 180.0;
  const auto five = transverse_gain_axes(build_gain_matrix(tensors, Vec3(std::cos(a), std::sin(a), 0)));
  EXPECT_NEAR(five.max_axis * 180.0 / kPi, 43.75, 0.01);
}

TEST(TransverseGain, FrameDirectionFollowsReference) {
  TransverseFrame f;
  EXPECT_NEAR((f.direction(0.0) - Vec3::UnitX()).norm(), 0.0, 1e-15);
  EXPECT_NEAR((f.direction(kPi / 2) - Vec3::UnitY()).norm(), 0.0, 1e-15);
}
