#pragma once

#include "ramanpol/experiment.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace ramanpol {

inline constexpr const char* kSoftwareVersion = "1.0.0";

/// Header comment for CSV outputs: "# seed=<n> config_hash=<hex>".
std::string provenance_line(const ExperimentConfig& cfg);

/// `pulse_index,e_h,e_v,theta_deg,measurable`; θ is empty for unmeasurable rows.
void write_pulses_csv(const std::filesystem::path& path, const ExperimentConfig& cfg, const RunResult& run);

/// Measured θ of measurable pulses, one per line under a `theta_deg` header.
void write_theta_csv(const std::filesystem::path& path, const ExperimentConfig& cfg, const RunResult& run);

void write_histogram_csv(const std::filesystem::path& path, const ExperimentConfig& cfg,
                         const std::vector<HistogramBin>& bins);

/// Writes `j` with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

nlohmann::ordered_json config_json(const ExperimentConfig& cfg);
nlohmann::ordered_json run_summary_json(const RunResult& run);
nlohmann::ordered_json pe_report_json(const PeTestReport& r);
nlohmann::ordered_json min_entropy_json(const std::vector<MinEntropyReport>& r, double reference_bits);
nlohmann::ordered_json shuffle_json(const std::vector<ShuffleResult>& r);

/// θ values read from a CSV. Accepts a single θ column (optional header)
/// or the pulses layout, where rows flagged unmeasurable are excluded.
struct ThetaFile {
  std::vector<double> values;
  long long rows = 0;
  long long excluded_unmeasurable = 0;
  std::vector<long long> malformed_lines;
};

/// Lines starting with '#' and blank lines are ignored. Throws ConfigError
/// naming the first bad line when more than 1% of data rows are malformed.
ThetaFile read_theta_csv(const std::filesystem::path& path);

}  // namespace ramanpol
