#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ramanpol {

/// Upper tail of the χ² distribution with `dof` degrees of freedom.
double chi_square_sf(double statistic, double dof);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  int bins = 0;  ///< bins after merging
};

/// Counts against equal expected probabilities.
ChiSquareResult chi_square_uniform(std::span<const long long> counts);

/// Counts against `probabilities` (normalized internally). Adjacent bins are
/// merged left to right until each expected count reaches `min_expected`.
ChiSquareResult chi_square_gof(std::span<const long long> counts,
                               std::span<const double> probabilities, double min_expected = 5.0);

/// Kolmogorov distribution survival function Q(λ) = 2 Σ (-1)^{k-1} e^{-2k²λ²}.
double kolmogorov_sf(double lambda);

struct KsResult {
  double statistic = 0.0;  ///< sup |F_n - F|
  double p_value = 1.0;
  double n_effective = 0.0;
};

/// One-sample test against a continuous CDF. p-values use Stephens'
/// finite-n correction λ = (√n + 0.12 + 0.11/√n) D.
KsResult ks_one_sample(std::span<const double> data, const std::function<double(double)>& cdf);

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Exponential fit by the sample mean followed by the one-sample test.
/// `mean` receives the fitted scale.
KsResult ks_exponential(std::span<const double> data, double* mean = nullptr);

/// Circular standard deviation √(-2 ln R) for data with the given period,
/// in the same units as the data (axial angles use period 180°).
double circular_std(std::span<const double> angles, double period);

/// Circular mean in [0, period).
double circular_mean(std::span<const double> angles, double period);

}  // namespace ramanpol
