#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ramanpol {

/// Measured θ values in degrees, in pulse order.
struct ThetaSequence {
  std::vector<double> values;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::uint64_t first_pulse = 0;
  std::uint64_t last_pulse = 0;

  /// Requires at least two values, all within [0, 90].
  void validate() const;
};

/// Embedding dimension d (2..7) and delay t (>= 1).
struct OrdinalConfig {
  int d = 3;
  int t = 1;

  void validate() const;
};

/// Counts over [0, 90] in bins of `bin_width` degrees; 90 itself falls into
/// the last bin. The width must divide 90.
std::vector<long long> histogram(std::span<const double> values, double bin_width);

/// d! as an integer.
int factorial(int d);

/// Lehmer index of the rank pattern of (x_i, x_{i+t}, ..., x_{i+(d-1)t}) for
/// every start i (overlapping windows). Ties rank the earlier element lower.
/// The increasing pattern is 0 and the decreasing pattern is d! - 1.
std::vector<int> ordinal_encode(std::span<const double> values, const OrdinalConfig& cfg);

/// Pattern indices of the disjoint windows used by the test: the sequence
/// is cut into blocks of d·t samples and each block holds t interleaved
/// windows, so no sample appears in two windows.
std::vector<int> ordinal_encode_disjoint(std::span<const double> values, const OrdinalConfig& cfg);

struct PeResult {
  OrdinalConfig cfg;
  long long windows = 0;
  double statistic = 0.0;  ///< χ² of pattern counts against the uniform law
  double p_value = 1.0;
  double entropy_bits = 0.0;  ///< Shannon entropy of the pattern frequencies
};

/// iid test on ordinal patterns: χ² goodness of fit of the disjoint-window
/// pattern counts against d! equally likely patterns. Throws InsufficientData
/// below 10·d! windows.
PeResult pe_test(std::span<const double> values, const OrdinalConfig& cfg);

struct PeDimensionSummary {
  int d = 0;
  int tests = 0;
  int skipped = 0;          ///< delays without enough windows
  std::vector<int> below;   ///< counts of p below each threshold
  std::vector<double> expected;
  std::vector<double> band_lo;  ///< expected ± 3 binomial σ
  std::vector<double> band_hi;
  std::vector<double> p_values;  ///< by delay, tested delays only
};

struct PeTestReport {
  std::vector<double> thresholds{0.1, 0.01, 0.001};
  std::vector<PeDimensionSummary> dimensions;

  /// True if every count sits inside its 3σ band.
  bool within_bands() const;
};

/// Runs pe_test for every d in `d_set` and t = 1..t_max.
PeTestReport pe_battery(std::span<const double> values, std::span<const int> d_set = {},
                        int t_max = 1000, int threads = 1);

/// n·p ± 3√(n p (1 - p)), clipped at zero.
std::pair<double, double> binomial_band(int n, double p, double sigmas = 3.0);

struct MinEntropyReport {
  double bin_width = 1.0;
  int symbol_count = 0;
  long long samples = 0;
  long long most_common_count = 0;
  double raw_bits = 0.0;       ///< -log2 p̂
  double adjusted_bits = 0.0;  ///< -log2 of the 99% upper bound on p̂
  double max_bits = 0.0;       ///< log2(symbol_count)
};

/// Most-common-value estimate on θ quantized into `bin_width`-degree bins.
/// The upper bound is p̂ + 2.576 √(p̂(1 - p̂)/(L - 1)). Needs >= 1000 values.
MinEntropyReport min_entropy_mcv(std::span<const double> values, double bin_width = 1.0);

enum class ShuffleStatistic { kLag1Autocorrelation, kRunsCount, kLongestRun, kMean };

const char* statistic_name(ShuffleStatistic s);

struct ShuffleResult {
  ShuffleStatistic statistic;
  double observed = 0.0;
  double p_value = 1.0;  ///< two-sided permutation p-value
};

/// Compares each statistic of `values` against its distribution over
/// `n_shuffles` seeded random permutations. Runs are taken about the median.
std::vector<ShuffleResult> shuffle_iid_check(std::span<const double> values,
                                             std::span<const ShuffleStatistic> statistics,
                                             int n_shuffles, std::uint64_t seed);

}  // namespace ramanpol
