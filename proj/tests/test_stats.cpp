#include "ramanpol/errors.hpp"
#include "ramanpol/stats.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace ramanpol;

TEST(ChiSquare, TailProbabilities) {
  EXPECT_NEAR(chi_square_sf(3.841458820694124, 1.0), 0.05, 1e-12);
  EXPECT_NEAR(chi_square_sf(18.307038053275146, 10.0), 0.05, 1e-12);
  EXPECT_NEAR(chi_square_sf(2.0, 2.0), std::exp(-1.0), 1e-15);
  EXPECT_EQ(chi_square_sf(0.0, 4.0), 1.0);
  EXPECT_THROW(chi_square_sf(1.0, 0.0), std::invalid_argument);
}

TEST(ChiSquare, UniformCounts) {
  const std::vector<long long> flat(10, 50);
  const auto r = chi_square_uniform(flat);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.dof, 9.0);
  const std::vector<long long> skew{100, 0, 0, 0};
  EXPECT_NEAR(chi_square_uniform(skew).statistic, 300.0, 1e-12);
  EXPECT_LT(chi_square_uniform(skew).p_value, 1e-60);
}

TEST(ChiSquare, MergesSparseBins) {
  const std::vector<long long> counts{1, 2, 50, 47};
  const std::vector<double> probs{0.01, 0.02, 0.5, 0.47};
  const auto r = chi_square_gof(counts, probs, 5.0);
  EXPECT_EQ(r.bins, 2);
  EXPECT_EQ(r.dof, 1.0);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  const std::vector<long long> impossible{5, 5};
  const std::vector<double> zero_p{1.0, 0.0};
  EXPECT_EQ(chi_square_gof(impossible, zero_p, 0.0).p_value, 0.0);
}

TEST(Kolmogorov, KnownValuesAndContinuity) {
  EXPECT_NEAR(kolmogorov_sf(1.3580986393225507), 0.05, 1e-9);
  EXPECT_NEAR(kolmogorov_sf(1.6276236115189480), 0.01, 1e-9);
  EXPECT_NEAR(kolmogorov_sf(0.5), 0.9639452436648751, 1e-12);
  EXPECT_NEAR(kolmogorov_sf(1.0 - 1e-9), kolmogorov_sf(1.0 + 1e-9), 1e-8);
  EXPECT_EQ(kolmogorov_sf(0.0), 1.0);
  EXPECT_LT(kolmogorov_sf(5.0), 1e-20);
}

TEST(Ks, StatisticMatchesBruteForce) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u;
  std::vector<double> x(200);
  for (auto& v : x) v = u(rng);
  auto cdf = [](double v) { return v * v; };
  double brute = 0.0;
  for (double t : x) {
    const double below = std::count_if(x.begin(), x.end(), [t](double v) { return v <= t; });
    const double strictly = std::count_if(x.begin(), x.end(), [t](double v) { return v < t; });
    brute = std::max({brute, below / x.size() - cdf(t), cdf(t) - strictly / x.size()});
  }
  EXPECT_NEAR(ks_one_sample(x, cdf).statistic, brute, 1e-15);
}

TEST(Ks, OneSamplePValuesAreCalibrated) {
  std::vector<double> p;
  for (int seed = 0; seed < 500; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u;
    std::vector<double> x(300);
    for (auto& v : x) v = u(rng);
    p.push_back(ks_one_sample(x, [](double v) { return v; }).p_value);
  }
  EXPECT_GT(ks_one_sample(p, [](double v) { return v; }).p_value, 0.01);
}

TEST(Ks, TwoSample) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<double> a(3000), b(2000), c(2000);
  for (auto& v : a) v = g(rng);
  for (auto& v : b) v = g(rng);
  for (auto& v : c) v = g(rng) + 0.3;
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
  EXPECT_LT(ks_two_sample(a, c).p_value, 1e-6);
  EXPECT_NEAR(ks_two_sample(a, a).statistic, 0.0, 1e-15);
}

TEST(Ks, ExponentialFit) {
  std::mt19937_64 rng(6);
  std::exponential_distribution<double> e(0.2);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> x(5000), y(5000);
  for (auto& v : x) v = e(rng);
  for (auto& v : y) v = u(rng);
  double mean = 0.0;
  EXPECT_GT(ks_exponential(x, &mean).p_value, 0.01);
  EXPECT_NEAR(mean, 5.0, 0.3);
  EXPECT_LT(ks_exponential(y).p_value, 1e-6);
  EXPECT_THROW(ks_exponential(std::vector<double>{1.0}), InsufficientData);
}

TEST(Circular, AxialStatistics) {
  const std::vector<double> wrap{179.0, 1.0, 178.0, 2.0};
  EXPECT_NEAR(std::min(circular_mean(wrap, 180.0), 180.0 - circular_mean(wrap, 180.0)), 0.0, 1e-9);
  EXPECT_LT(circular_std(wrap, 180.0), 2.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(40.0, 1.5);
  std::vector<double> tight(20000);
  for (auto& v : tight) v = g(rng);
  EXPECT_NEAR(circular_std(tight, 180.0), 1.5, 0.05);
  EXPECT_NEAR(circular_mean(tight, 180.0), 40.0, 0.05);
  std::uniform_real_distribution<double> u(0.0, 180.0);
  std::vector<double> spread(20000);
  for (auto& v : spread) v = u(rng);
  EXPECT_GT(circular_std(spread, 180.0), 60.0);
}
