#include "ramanpol/stats.hpp"
#include "ramanpol/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ramanpol {

double chi_square_sf(double statistic, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi_square_sf: dof must be positive");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquareResult chi_square_uniform(std::span<const long long> counts) {
  std::vector<double> p(counts.size(), 1.0);
  return chi_square_gof(counts, p, 0.0);
}

ChiSquareResult chi_square_gof(std::span<const long long> counts,
                               std::span<const double> probabilities, double min_expected) {
  if (counts.size() != probabilities.size() || counts.size() < 2) {
    throw std::invalid_argument("chi_square_gof: need matching count/probability vectors (>= 2 bins)");
  }
  double total_p = 0.0;
  long long n = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probabilities[i] < 0.0) throw std::invalid_argument("chi_square_gof: negative probability");
    total_p += probabilities[i];
    n += counts[i];
  }
  if (n == 0 || !(total_p > 0.0)) throw InsufficientData("chi_square_gof: no observations");

  ChiSquareResult r;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probabilities[i] == 0.0 && counts[i] > 0) {
      // An observation where none is possible rejects outright.
      r.statistic = std::numeric_limits<double>::infinity();
      r.bins = static_cast<int>(counts.size());
      r.dof = r.bins - 1;
      r.p_value = 0.0;
      return r;
    }
  }

  std::vector<double> obs, exp;
  double o = 0.0, e = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    o += static_cast<double>(counts[i]);
    e += n * probabilities[i] / total_p;
    if (e >= min_expected && e > 0.0) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (exp.empty()) {
      obs.push_back(o);
      exp.push_back(e);
    } else {
      obs.back() += o;
      exp.back() += e;
    }
  }
  r.bins = static_cast<int>(exp.size());
  if (r.bins < 2) throw InsufficientData("chi_square_gof: fewer than two bins after merging");
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (exp[i] <= 0.0) {
      if (obs[i] > 0.0) {
        r.statistic = std::numeric_limits<double>::infinity();
        break;
      }
      continue;
    }
    r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  r.dof = r.bins - 1;
  r.p_value = std::isinf(r.statistic) ? 0.0 : chi_square_sf(r.statistic, r.dof);
  return r;
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    // Jacobi-transformed series converges fast for small λ.
    const double pi = std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double term = std::exp(-(2 * k - 1) * (2 * k - 1) * pi * pi / (8.0 * lambda * lambda));
      s += term;
      if (term < 1e-17 * s) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double stephens_p(double d, double n) {
  const double rn = std::sqrt(n);
  return kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

KsResult ks_one_sample(std::span<const double> data, const std::function<double(double)>& cdf) {
  if (data.empty()) throw InsufficientData("ks_one_sample: empty sample");
  std::vector<double> x(data.begin(), data.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, stephens_p(d, n), n};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InsufficientData("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  const double ne = n * m / (n + m);
  return {d, stephens_p(d, ne), ne};
}

KsResult ks_exponential(std::span<const double> data, double* mean) {
  if (data.size() < 2) throw InsufficientData("ks_exponential: need at least two values");
  double s = 0.0;
  for (double v : data) {
    if (v < 0.0) throw std::invalid_argument("ks_exponential: negative value");
    s += v;
  }
  const double mu = s / data.size();
  if (!(mu > 0.0)) throw InsufficientData("ks_exponential: all values zero");
  if (mean) *mean = mu;
  return ks_one_sample(data, [mu](double v) { return -std::expm1(-v / mu); });
}

namespace {

std::complex<double> resultant(std::span<const double> angles, double period) {
  if (angles.empty()) throw InsufficientData("circular statistics of an empty sample");
  if (!(period > 0.0)) throw std::invalid_argument("circular statistics: period must be positive");
  std::complex<double> z = 0.0;
  const double k = 2.0 * std::numbers::pi / period;
  for (double a : angles) z += std::polar(1.0, k * a);
  return z / static_cast<double>(angles.size());
}

}  // namespace

double circular_std(std::span<const double> angles, double period) {
  const double r = std::abs(resultant(angles, period));
  if (r <= 0.0) return std::numeric_limits<double>::infinity();
  return period / (2.0 * std::numbers::pi) * std::sqrt(-2.0 * std::log(std::min(1.0, r)));
}

double circular_mean(std::span<const double> angles, double period) {
  double m = std::arg(resultant(angles, period)) * period / (2.0 * std::numbers::pi);
  if (m < 0.0) m += period;
  return m >= period ? m - period : m;
}

}  // namespace ramanpol
