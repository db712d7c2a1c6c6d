#include "ramanpol/randomness.hpp"
#include "ramanpol/errors.hpp"
#include "ramanpol/parallel.hpp"
#include "ramanpol/rng.hpp"
#include "ramanpol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ramanpol {

void ThetaSequence::validate() const {
  if (values.size() < 2) throw InsufficientData("theta sequence needs at least two values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 90.0)) {
      std::ostringstream msg;
      msg << "theta value " << values[i] << " at position " << i << " outside [0, 90]";
      throw std::invalid_argument(msg.str());
    }
  }
}

void OrdinalConfig::validate() const {
  if (d < 2 || d > 7) throw std::invalid_argument("ordinal config: d must be in [2, 7]");
  if (t < 1) throw std::invalid_argument("ordinal config: t must be >= 1");
}

int factorial(int d) {
  int f = 1;
  for (int k = 2; k <= d; ++k) f *= k;
  return f;
}

std::vector<long long> histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("histogram: bin width must be positive");
  const double ratio = 90.0 / bin_width;
  const long long bins = std::llround(ratio);
  if (bins < 1 || std::abs(ratio - bins) > 1e-9 * ratio) {
    throw std::invalid_argument("histogram: bin width must divide 90 degrees");
  }
  std::vector<long long> counts(bins, 0);
  for (double v : values) {
    if (!(v >= 0.0 && v <= 90.0)) throw std::invalid_argument("histogram: value outside [0, 90]");
    const long long b = std::min(bins - 1, static_cast<long long>(v / bin_width));
    ++counts[b];
  }
  return counts;
}

namespace {

// Lehmer index of the rank pattern of x[start + k*t], k < d.
int pattern_index(std::span<const double> x, std::size_t start, int d, int t) {
  int index = 0;
  for (int i = 0; i < d; ++i) {
    const double xi = x[start + static_cast<std::size_t>(i) * t];
    int smaller_later = 0;
    for (int j = i + 1; j < d; ++j) {
      // Ties: the earlier element ranks lower, so a later equal value is larger.
      if (x[start + static_cast<std::size_t>(j) * t] < xi) ++smaller_later;
    }
    index = index * (d - i) + smaller_later;
  }
  return index;
}

}  // namespace

std::vector<int> ordinal_encode(std::span<const double> values, const OrdinalConfig& cfg) {
  cfg.validate();
  const std::size_t span = static_cast<std::size_t>(cfg.d - 1) * cfg.t + 1;
  if (values.size() < span) throw InsufficientData("ordinal_encode: sequence shorter than one window");
  std::vector<int> out(values.size() - span + 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pattern_index(values, i, cfg.d, cfg.t);
  return out;
}

std::vector<int> ordinal_encode_disjoint(std::span<const double> values, const OrdinalConfig& cfg) {
  cfg.validate();
  const std::size_t block = static_cast<std::size_t>(cfg.d) * cfg.t;
  const std::size_t blocks = values.size() / block;
  std::vector<int> out;
  out.reserve(blocks * cfg.t);
  for (std::size_t b = 0; b < blocks; ++b)
    for (int o = 0; o < cfg.t; ++o) out.push_back(pattern_index(values, b * block + o, cfg.d, cfg.t));
  return out;
}

PeResult pe_test(std::span<const double> values, const OrdinalConfig& cfg) {
  const auto patterns = ordinal_encode_disjoint(values, cfg);
  const int k = factorial(cfg.d);
  if (static_cast<long long>(patterns.size()) < 10LL * k) {
    std::ostringstream msg;
    msg << "pe_test: " << patterns.size() << " disjoint windows for d=" << cfg.d << ", t=" << cfg.t
        << "; need at least " << 10 * k;
    throw InsufficientData(msg.str());
  }
  std::vector<long long> counts(k, 0);
  for (int p : patterns) ++counts[p];
  PeResult r;
  r.cfg = cfg;
  r.windows = static_cast<long long>(patterns.size());
  const auto chi = chi_square_uniform(counts);
  r.statistic = chi.statistic;
  r.p_value = chi.p_value;
  for (long long c : counts) {
    if (c == 0) continue;
    const double f = static_cast<double>(c) / r.windows;
    r.entropy_bits -= f * std::log2(f);
  }
  return r;
}

std::pair<double, double> binomial_band(int n, double p, double sigmas) {
  const double mean = n * p;
  const double sd = std::sqrt(n * p * (1.0 - p));
  return {std::max(0.0, mean - sigmas * sd), mean + sigmas * sd};
}

bool PeTestReport::within_bands() const {
  for (const auto& d : dimensions)
    for (std::size_t i = 0; i < d.below.size(); ++i)
      if (d.below[i] < d.band_lo[i] || d.below[i] > d.band_hi[i]) return false;
  return true;
}

PeTestReport pe_battery(std::span<const double> values, std::span<const int> d_set, int t_max,
                        int threads) {
  if (t_max < 1) throw std::invalid_argument("pe_battery: t_max must be >= 1");
  static const int kDefaultDims[] = {3, 4, 5};
  if (d_set.empty()) d_set = kDefaultDims;
  PeTestReport report;
  for (int d : d_set) {
    OrdinalConfig{d, 1}.validate();
    std::vector<double> p(t_max, -1.0);
    parallel_for(static_cast<std::size_t>(t_max), threads, [&](std::size_t i, int) {
      try {
        p[i] = pe_test(values, OrdinalConfig{d, static_cast<int>(i) + 1}).p_value;
      } catch (const InsufficientData&) {
        p[i] = -1.0;
      }
    });
    PeDimensionSummary s;
    s.d = d;
    for (double v : p) {
      if (v < 0.0) {
        ++s.skipped;
      } else {
        s.p_values.push_back(v);
      }
    }
    s.tests = static_cast<int>(s.p_values.size());
    for (double thr : report.thresholds) {
      s.below.push_back(static_cast<int>(
          std::count_if(s.p_values.begin(), s.p_values.end(), [thr](double v) { return v < thr; })));
      s.expected.push_back(s.tests * thr);
      const auto band = binomial_band(s.tests, thr);
      s.band_lo.push_back(band.first);
      s.band_hi.push_back(band.second);
    }
    report.dimensions.push_back(std::move(s));
  }
  return report;
}

MinEntropyReport min_entropy_mcv(std::span<const double> values, double bin_width) {
  if (values.size() < 1000) throw InsufficientData("min_entropy_mcv: need at least 1000 values");
  const auto counts = histogram(values, bin_width);
  if (counts.size() < 2) throw std::invalid_argument("min_entropy_mcv: binning yields a single symbol");
  MinEntropyReport r;
  r.bin_width = bin_width;
  r.symbol_count = static_cast<int>(counts.size());
  r.samples = static_cast<long long>(values.size());
  r.most_common_count = *std::max_element(counts.begin(), counts.end());
  const double n = static_cast<double>(r.samples);
  const double p = r.most_common_count / n;
  const double upper = std::min(1.0, p + 2.576 * std::sqrt(p * (1.0 - p) / (n - 1.0)));
  r.raw_bits = std::max(0.0, -std::log2(p));
  r.adjusted_bits = std::max(0.0, -std::log2(upper));
  r.max_bits = std::log2(static_cast<double>(r.symbol_count));
  return r;
}

const char* statistic_name(ShuffleStatistic s) {
  switch (s) {
    case ShuffleStatistic::kLag1Autocorrelation: return "lag1_autocorrelation";
    case ShuffleStatistic::kRunsCount: return "runs_count";
    case ShuffleStatistic::kLongestRun: return "longest_run";
    case ShuffleStatistic::kMean: return "mean";
  }
  return "unknown";
}

namespace {

double compute(ShuffleStatistic s, std::span<const double> x, double median) {
  const std::size_t n = x.size();
  switch (s) {
    case ShuffleStatistic::kMean:
      return std::accumulate(x.begin(), x.end(), 0.0) / n;
    case ShuffleStatistic::kLag1Autocorrelation: {
      const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        den += (x[i] - m) * (x[i] - m);
        if (i + 1 < n) num += (x[i] - m) * (x[i + 1] - m);
      }
      return den > 0.0 ? num / den : 0.0;
    }
    case ShuffleStatistic::kRunsCount:
    case ShuffleStatistic::kLongestRun: {
      // Values equal to the median are dropped, as in the usual runs test.
      long long runs = 0, longest = 0, current = 0;
      int last = 0;
      for (double v : x) {
        if (v == median) continue;
        const int side = v > median ? 1 : -1;
        if (side == last) {
          ++current;
        } else {
          ++runs;
          current = 1;
          last = side;
        }
        longest = std::max(longest, current);
      }
      return static_cast<double>(s == ShuffleStatistic::kRunsCount ? runs : longest);
    }
  }
  return 0.0;
}

}  // namespace

std::vector<ShuffleResult> shuffle_iid_check(std::span<const double> values,
                                             std::span<const ShuffleStatistic> statistics,
                                             int n_shuffles, std::uint64_t seed) {
  if (n_shuffles < 100) throw std::invalid_argument("shuffle_iid_check: need at least 100 shuffles");
  if (values.size() < 3) throw InsufficientData("shuffle_iid_check: need at least three values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  std::vector<ShuffleResult> out;
  std::vector<double> observed;
  for (auto s : statistics) {
    out.push_back({s, compute(s, values, median), 1.0});
    observed.push_back(out.back().observed);
  }
  std::vector<long long> ge(statistics.size(), 0), le(statistics.size(), 0);
  std::vector<double> work(values.begin(), values.end());
  Rng rng(derive_seed(seed, streams::kShuffle, 0));
  for (int r = 0; r < n_shuffles; ++r) {
    std::shuffle(work.begin(), work.end(), rng);
    for (std::size_t k = 0; k < statistics.size(); ++k) {
      const double v = compute(statistics[k], work, median);
      // Relative slack absorbs summation-order rounding for invariant statistics.
      const double tol = 1e-12 * std::max(1.0, std::abs(observed[k]));
      if (v >= observed[k] - tol) ++ge[k];
      if (v <= observed[k] + tol) ++le[k];
    }
  }
  for (std::size_t k = 0; k < statistics.size(); ++k) {
    const double upper = (1.0 + ge[k]) / (n_shuffles + 1.0);
    const double lower = (1.0 + le[k]) / (n_shuffles + 1.0);
    out[k].p_value = std::min(1.0, 2.0 * std::min(upper, lower));
  }
  return out;
}

}  // namespace ramanpol
