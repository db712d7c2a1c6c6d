#include "ramanpol/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ramanpol {

namespace {

// Below this the power series is used; above it the asymptotic expansion's
// smallest term is ~e^{-2x}, well under double precision.
constexpr double kSeriesLimit = 20.0;

double i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

// sqrt(2πx) e^{-x} I0(x) = Σ_k [(2k-1)!!]² / (k! 8^k x^k)
double i0_asymptotic_sum(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next > term) break;  // the series has started to diverge
    term = next;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

double bessel_i0(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("bessel_i0: negative argument");
  if (x > 700.0) throw std::invalid_argument("bessel_i0: argument above overflow-safe bound 700");
  if (x <= kSeriesLimit) return i0_series(x);
  return std::exp(x) * i0_asymptotic_sum(x) / std::sqrt(2.0 * std::numbers::pi * x);
}

double bessel_i0_scaled(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("bessel_i0_scaled: negative argument");
  if (x <= kSeriesLimit) return std::exp(-x) * i0_series(x);
  return i0_asymptotic_sum(x) / std::sqrt(2.0 * std::numbers::pi * x);
}

double kernel_h(double z, double z_prime, double a_value, double gamma, double tau,
                double tau_prime) {
  if (z < z_prime) throw std::invalid_argument("kernel_h: requires z >= z_prime");
  if (tau < tau_prime) throw std::invalid_argument("kernel_h: requires tau >= tau_prime");
  if (a_value < 0.0) throw std::invalid_argument("kernel_h: pump integral must be non-negative");
  const double arg = 2.0 * std::sqrt((z - z_prime) * a_value);
  return std::exp(arg - gamma * (tau - tau_prime)) * bessel_i0_scaled(arg);
}

}  // namespace ramanpol
