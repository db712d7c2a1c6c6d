#include "ramanpol/errors.hpp"
#include "ramanpol/measurement.hpp"
#include "ramanpol/rng.hpp"
#include "ramanpol/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ramanpol;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

PulseSample linear_pulse(double energy, double theta_deg) {
  PulseSample s;
  const double c = std::cos(theta_deg * kDeg), sn = std::sin(theta_deg * kDeg);
  s.e_x = energy * c * c;
  s.e_y = energy * sn * sn;
  s.cross = energy * c * sn;
  s.energy = energy;
  s.theta_true_deg = theta_deg;
  s.dop = 1.0;
  s.valid = true;
  return s;
}

std::vector<std::pair<double, double>> fixed_ratio_samples(double theta_deg, int n) {
  std::vector<std::pair<double, double>> out;
  const double t2 = std::pow(std::tan(theta_deg * kDeg), 2);
  for (int i = 0; i < n; ++i) {
    const double ev = 1.0 + 0.01 * i;
    out.emplace_back(t2 * ev, ev);
  }
  return out;
}

}  // namespace

TEST(Theta, BranchesAndEdges) {
  EXPECT_DOUBLE_EQ(theta_from_energies(2.0, 2.0, 1.0), 45.0);
  EXPECT_DOUBLE_EQ(theta_from_energies(1.5, 1.0, 1.5), 45.0);
  EXPECT_DOUBLE_EQ(theta_from_energies(0.0, 3.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(theta_from_energies(3.0, 0.0, 1.0), 90.0);
  EXPECT_NEAR(theta_from_energies(1.0, 3.0, 1.0), 30.0, 1e-12);
  EXPECT_NEAR(theta_from_energies(3.0, 1.0, 1.0), 60.0, 1e-12);
  EXPECT_THROW(theta_from_energies(0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(theta_from_energies(-1.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(theta_from_energies(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(Theta, ContinuousAtBranchBoundary) {
  const double eta = 0.8, ev = 2.0;
  EXPECT_NEAR(theta_from_energies(eta * ev * (1 - 1e-12), ev, eta), 45.0, 1e-9);
  EXPECT_NEAR(theta_from_energies(eta * ev * (1 + 1e-12), ev, eta), 45.0, 1e-9);
}

TEST(Theta, ScaleInvarianceAndSwapSymmetry) {
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> e;
  std::uniform_real_distribution<double> k(1e-3, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double h = e(rng), v = e(rng), s = k(rng), eta = k(rng) * 1e-3 + 0.2;
    EXPECT_NEAR(theta_from_energies(s * h, s * v, eta), theta_from_energies(h, v, eta), 1e-12);
    EXPECT_NEAR(theta_from_energies(h, v, 1.0) + theta_from_energies(v, h, 1.0), 90.0, 1e-12);
    const double t = theta_from_energies(h, v, eta);
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, 90.0);
  }
}

TEST(Theta, RecoversOrientationOfLinearPulses) {
  for (double t : {0.0, 10.0, 35.3, 60.0, 90.0, 120.0, 170.0}) {
    const auto d = detector_energies(linear_pulse(5.0, t));
    const double folded = t <= 90.0 ? t : 180.0 - t;
    EXPECT_NEAR(theta_from_energies(d.e_h, d.e_v, 1.0), folded, 1e-9) << t;
  }
}

TEST(Calibration, BalancedAndScaled) {
  auto s = fixed_ratio_samples(35.3, 200);
  EXPECT_NEAR(calibrate_eta(s).eta, 1.0, 1e-6);
  for (auto& p : s) p.second *= 2.0;
  EXPECT_NEAR(calibrate_eta(s).eta, 0.5, 1e-4);
  auto t = fixed_ratio_samples(35.3, 200);
  for (auto& p : t) p.first *= 0.7;  // loss on the E_h arm
  EXPECT_NEAR(calibrate_eta(t).eta, 0.7, 1e-4);
  auto u = fixed_ratio_samples(35.3, 200);
  for (auto& p : u) p.second *= 0.7;  // loss on the E_v arm
  EXPECT_NEAR(calibrate_eta(u).eta, 1.0 / 0.7, 1e-4);
}

TEST(Calibration, NoisySamplesRecoverTruth) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 0.1);
  const double truth = 0.8;
  const double t2 = std::pow(std::tan(35.3 * kDeg), 2);
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i < 2000; ++i) {
    const double ev = 1.0;
    s.emplace_back(truth * t2 * ev * (1.0 + g(rng)), ev * (1.0 + g(rng)));
  }
  const Calibration c = calibrate_eta(s);
  EXPECT_NEAR(c.eta / truth, 1.0, 0.02);
  EXPECT_NEAR(c.mean_theta_deg, 35.3, 0.01);
}

TEST(Calibration, Failures) {
  EXPECT_THROW(calibrate_eta(fixed_ratio_samples(35.3, 99)), InsufficientData);
  std::vector<std::pair<double, double>> zero_h(200, {0.0, 1.0});
  EXPECT_THROW(calibrate_eta(zero_h), NumericalError);
}

TEST(Digitizer, WindowAndNoise) {
  const DigitizerConfig cfg{0.1, 10.0, 0.0};
  auto r = apply_digitizer({2.0, 3.0}, cfg, 1);
  EXPECT_TRUE(r.measurable);
  EXPECT_EQ(r.e_h, 2.0);
  EXPECT_EQ(r.e_v, 3.0);
  EXPECT_FALSE(apply_digitizer({0.05, 3.0}, cfg, 1).measurable);
  EXPECT_FALSE(apply_digitizer({2.0, 11.0}, cfg, 1).measurable);
  const DigitizerConfig noisy{0.1, 10.0, 0.5};
  const auto a = apply_digitizer({2.0, 3.0}, noisy, 99), b = apply_digitizer({2.0, 3.0}, noisy, 99);
  EXPECT_EQ(a.e_h, b.e_h);
  EXPECT_NE(a.e_h, 2.0);
  EXPECT_THROW((DigitizerConfig{1.0, 1.0, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((DigitizerConfig{0.0, 1.0, -1.0}.validate()), std::invalid_argument);
}

TEST(Digitizer, ExtremeAnglesRejectedMoreOften) {
  const DigitizerConfig cfg = DigitizerConfig::relative(1.0, 0.02, 5.0, 0.0);
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(1.0);
  int rej5 = 0, rej45 = 0;
  for (int i = 0; i < 20000; ++i) {
    const double energy = e(rng);
    rej5 += !apply_digitizer(detector_energies(linear_pulse(energy, 5.0)), cfg, i).measurable;
    rej45 += !apply_digitizer(detector_energies(linear_pulse(energy, 45.0)), cfg, i).measurable;
  }
  EXPECT_GT(rej5, rej45);
}

TEST(ExpectedDensity, OpenWindowIsUniform) {
  const DigitizerConfig open{};
  std::vector<double> grid;
  for (double t = 0.5; t < 90.0; t += 1.0) grid.push_back(t);
  const auto d = expected_measured_density(grid, open, 1.0);
  for (double v : d) EXPECT_NEAR(v, 1.0 / 90.0, 1e-12);
}

TEST(ExpectedDensity, SymmetricAndCentreWeighted) {
  const DigitizerConfig cfg = DigitizerConfig::relative(1.0, 0.02, 5.0, 0.0);
  std::vector<double> grid;
  for (double t = 0.5; t < 90.0; t += 1.0) grid.push_back(t);
  const auto d = expected_measured_density(grid, cfg, 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d[i], d[d.size() - 1 - i], 1e-12);
  const double at45 = expected_measured_density(std::vector<double>{45.0}, cfg, 1.0)[0];
  const double at5 = expected_measured_density(std::vector<double>{5.0}, cfg, 1.0)[0];
  EXPECT_GT(at45, at5);
  double integral = 0.0;
  for (double v : d) integral += v;
  EXPECT_NEAR(integral, 1.0, 1e-4);  // midpoint sum over 1° bins
  std::vector<double> edges;
  for (int k = 0; k <= 90; ++k) edges.push_back(k);
  const auto p = expected_bin_probabilities(edges, cfg, 1.0);
  double total = 0.0;
  for (double v : p) total += v;
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(ExpectedDensity, NoisyWindowApproachesNoiseless) {
  const DigitizerConfig exact = DigitizerConfig::relative(1.0, 0.02, 5.0, 0.0);
  const DigitizerConfig noisy = DigitizerConfig::relative(1.0, 0.02, 5.0, 1e-5);
  const std::vector<double> grid{3.0, 20.0, 45.0, 80.0};
  const auto a = expected_measured_density(grid, exact, 1.0);
  const auto b = expected_measured_density(grid, noisy, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-3 * a[i]);
}

TEST(ExpectedDensity, MatchesMonteCarloHistogram) {
  const double mean = 1.0;
  const DigitizerConfig cfg = DigitizerConfig::relative(mean, 0.02, 5.0, 0.0);
  Rng rng(derive_seed(8, streams::kSynthetic, 0));
  std::exponential_distribution<double> energy(1.0 / mean);
  std::uniform_real_distribution<double> orient(0.0, 180.0);
  std::vector<long long> counts(90, 0);
  for (int i = 0; i < 100000; ++i) {
    const auto d = detector_energies(linear_pulse(energy(rng), orient(rng)));
    if (!apply_digitizer(d, cfg, i).measurable) continue;
    ++counts[std::min(89, static_cast<int>(theta_from_energies(d.e_h, d.e_v, 1.0)))];
  }
  std::vector<double> edges;
  for (int k = 0; k <= 90; ++k) edges.push_back(k);
  const auto p = expected_bin_probabilities(edges, cfg, mean);
  EXPECT_GT(chi_square_gof(counts, p).p_value, 0.01);
}

TEST(ExpectedDensity, RotatedBasisLeavesDistributionUnchanged) {
  const DigitizerConfig cfg = DigitizerConfig::relative(1.0, 0.02, 5.0, 0.0);
  Rng rng(derive_seed(9, streams::kSynthetic, 0));
  std::exponential_distribution<double> energy(1.0);
  std::uniform_real_distribution<double> orient(0.0, 180.0);
  std::vector<double> a, b;
  for (int i = 0; i < 20000; ++i) {
    const auto p = linear_pulse(energy(rng), orient(rng));
    const auto q = linear_pulse(energy(rng), orient(rng));
    const auto da = detector_energies(p), db = detector_energies(q, 31.0);
    if (apply_digitizer(da, cfg, i).measurable) a.push_back(theta_from_energies(da.e_h, da.e_v, 1.0));
    if (apply_digitizer(db, cfg, i).measurable) b.push_back(theta_from_energies(db.e_h, db.e_v, 1.0));
  }
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
}
