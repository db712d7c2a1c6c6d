#pragma once

#include "ramanpol/engine.hpp"
#include "ramanpol/ensemble.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace ramanpol {

enum class CalibrationMode { kNone, kFixed, kFile };

/// Everything one CLI run needs. Every field has a default, so an empty
/// file is a valid configuration.
struct ExperimentConfig {
  // [crystal] directions are cubic Miller indices.
  Vec3 propagation{1.0, 1.0, 0.0};
  Vec3 reference_axis{-1.0, 1.0, 0.0};
  double polarization_offset_deg = 0.0;
  std::optional<Vec3> polarization_axis;  ///< overrides the offset when set

  // [grid]
  SimGrid grid;

  // [pump]
  double gain = 20.0;  ///< total gain G = a(window, 0)·length
  std::string envelope = "flat";
  double envelope_center = 0.5;
  double envelope_width = 0.25;

  // [noise]
  NoiseParams noise;

  // [run]
  long long pulses = 10000;
  std::uint64_t seed = 1;
  int threads = 0;
  Solver solver = Solver::kFiniteDifference;

  // [detector]
  double basis_rotation_deg = 0.0;
  double transmission_h = 1.0;
  double transmission_v = 1.0;

  // [digitizer] window relative to the mean pulse energy of the run.
  bool digitizer_enabled = false;
  double floor_rel = 0.02;
  double ceiling_rel = 5.0;
  double sigma_rel = 0.0;

  // [calibration]
  CalibrationMode calibration = CalibrationMode::kNone;
  double eta = 1.0;
  std::filesystem::path calibration_file;
  double reference_deg = 35.3;

  // [output]
  std::filesystem::path output_dir = "out";

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Sorted key = value listing of every setting, stable across runs.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
};

/// Parses an INI file. Unknown sections or keys and malformed values raise
/// ConfigError with the file line (syntax) or section.key (values).
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");

/// Lab-frame simulation setup for the configured crystal cut and pump.
SimulationSetup make_setup(const ExperimentConfig& cfg);

/// Pump polarization angle in the lab frame, degrees from the reference axis.
double pump_angle_deg(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace ramanpol
