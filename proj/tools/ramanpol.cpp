#include "ramanpol/errors.hpp"
#include "ramanpol/experiment.hpp"
#include "ramanpol/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

using namespace ramanpol;
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kStatistical = 3 };

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<long long> pulses;
  std::optional<int> threads;
  std::optional<std::string> out;
  bool full = false;
};

void add_common(CLI::App* app, CommonOptions& o, bool with_full) {
  app->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--pulses", o.pulses, "number of pulses / realizations");
  app->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  app->add_option("--out", o.out, "output directory");
  if (with_full) app->add_flag("--full", o.full, "use 1e5 pulses");
}

ExperimentConfig resolve(const CommonOptions& o, std::optional<long long> default_pulses = {}) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (default_pulses) cfg.pulses = *default_pulses;
  if (o.full) cfg.pulses = 100000;
  if (o.seed) cfg.seed = *o.seed;
  if (o.pulses) cfg.pulses = *o.pulses;
  if (o.threads) cfg.threads = *o.threads;
  if (o.out) cfg.output_dir = *o.out;
  cfg.validate();
  return cfg;
}

Json header(const std::string& command, const ExperimentConfig& cfg) {
  Json j;
  j["command"] = command;
  j["software_version"] = kSoftwareVersion;
  j["seed"] = cfg.seed;
  j["config_hash"] = cfg.hash();
  j["config"] = config_json(cfg);
  return j;
}

int cmd_simulate(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const RunResult run = run_pulses(cfg);
  const fs::path dir = cfg.output_dir;
  write_pulses_csv(dir / "pulses.csv", cfg, run);
  write_theta_csv(dir / "theta.csv", cfg, run);
  Json meta = header("simulate", cfg);
  meta["run"] = run_summary_json(run);
  write_json(dir / "metadata.json", meta);
  std::cout << "simulated " << run.pulses.size() << " pulses (" << run.unmeasurable
            << " unmeasurable) -> " << dir.string() << "\n";
  return kOk;
}

int cmd_fig3(const ExperimentConfig& cfg) {
  const Fig3Result r = ramanpol::reproduce_fig3(cfg);
  const fs::path dir = cfg.output_dir;
  Json meta = header("reproduce fig3", cfg);
  Json offsets = Json::array();
  for (const auto& o : r.offsets) {
    std::ostringstream name;
    name << "fig3_offset_" << o.offset_deg << "deg.csv";
    write_histogram_csv(dir / name.str(), cfg, o.histogram);
    Json e;
    e["offset_deg"] = o.offset_deg;
    e["circular_std_deg"] = o.circular_std_deg;
    e["circular_mean_deg"] = o.circular_mean_deg;
    e["measured_std_deg"] = o.measured_std_deg;
    e["histogram_file"] = name.str();
    e["run"] = run_summary_json(o.run);
    offsets.push_back(e);
    std::cout << "offset " << o.offset_deg << " deg: circular std " << o.circular_std_deg << " deg\n";
  }
  meta["offsets"] = offsets;
  meta["strictly_decreasing"] = r.strictly_decreasing;
  meta["passed"] = r.strictly_decreasing;
  write_json(dir / "fig3_report.json", meta);
  std::cout << "fig3: " << (r.strictly_decreasing ? "PASS" : "FAIL") << "\n";
  return r.strictly_decreasing ? kOk : kStatistical;
}

int cmd_fig4(const ExperimentConfig& cfg) {
  const Fig4Result r = ramanpol::reproduce_fig4(cfg);
  const fs::path dir = cfg.output_dir;
  write_histogram_csv(dir / "fig4_original.csv", cfg, r.original_histogram);
  write_histogram_csv(dir / "fig4_rotated.csv", cfg, r.rotated_histogram);
  {
    std::ofstream out(dir / "fig4_expected_density.csv", std::ios::binary);
    out << std::setprecision(17) << provenance_line(cfg) << "\ntheta_deg,density_per_deg\n";
    for (std::size_t i = 0; i < r.density.size(); ++i) out << r.density_theta[i] << ',' << r.density[i] << '\n';
  }
  Json meta = header("reproduce fig4", cfg);
  meta["rotation_deg"] = r.rotation_deg;
  meta["original"] = run_summary_json(r.original);
  meta["rotated"] = run_summary_json(r.rotated);
  meta["density_chi_square"] = {{"statistic", r.chi_square.statistic},
                                {"dof", r.chi_square.dof},
                                {"p_value", r.chi_square.p_value}};
  meta["rotation_ks"] = {{"statistic", r.ks.statistic}, {"p_value", r.ks.p_value}};
  meta["passed"] = r.passed;
  write_json(dir / "fig4_report.json", meta);
  std::cout << "fig4: rotated-vs-original KS p = " << r.ks.p_value << ", density chi2 p = "
            << r.chi_square.p_value << " -> " << (r.passed ? "PASS" : "FAIL") << "\n";
  return r.passed ? kOk : kStatistical;
}

int cmd_table1(const ExperimentConfig& cfg) {
  const Table1Result r = ramanpol::reproduce_table1(cfg);
  const fs::path dir = cfg.output_dir;
  write_theta_csv(dir / "table1_theta.csv", cfg, r.run);
  Json meta = header("reproduce table1", cfg);
  meta["run"] = run_summary_json(r.run);
  meta["pe_battery"] = pe_report_json(r.report);
  meta["reference_counts"] = r.reference_counts;
  meta["reference_within_bands"] = r.reference_within_bands;
  meta["passed"] = r.passed;
  write_json(dir / "table1_report.json", meta);
  for (const auto& d : r.report.dimensions) {
    std::cout << "d=" << d.d << " tests=" << d.tests << " below(0.1,0.01,0.001) = " << d.below[0] << ", "
              << d.below[1] << ", " << d.below[2] << "\n";
  }
  std::cout << "table1: " << (r.passed ? "PASS" : "FAIL") << "\n";
  return r.passed ? kOk : kStatistical;
}

int cmd_analyze(const std::string& csv, const CommonOptions& o, int t_max, double bin_width) {
  const ThetaFile f = read_theta_csv(csv);
  const ExperimentConfig cfg = resolve(o);
  if (f.values.size() < 2) throw InsufficientData("analyze: fewer than two measurable values");
  const AnalysisResult r = analyze_sequence(f.values, t_max, bin_width, cfg.threads, cfg.seed);
  const fs::path dir = cfg.output_dir;
  Json j;
  j["command"] = "analyze";
  j["software_version"] = kSoftwareVersion;
  j["input"] = fs::path(csv).filename().string();
  j["seed"] = cfg.seed;
  j["rows"] = f.rows;
  j["values"] = f.values.size();
  j["excluded_unmeasurable"] = f.excluded_unmeasurable;
  j["malformed_lines"] = f.malformed_lines;
  j["bin_width"] = bin_width;
  j["pe_battery"] = pe_report_json(r.pe);
  j["min_entropy"] = min_entropy_json(r.min_entropy, r.reference_min_entropy_bits);
  j["shuffle_checks"] = shuffle_json(r.shuffle);
  write_json(dir / "analysis.json", j);
  {
    std::ofstream out(dir / "analysis_histogram.csv", std::ios::binary);
    out << "bin_lo_deg,bin_hi_deg,count\n";
    for (const auto& b : r.histogram) out << b.lo << ',' << b.hi << ',' << b.count << '\n';
  }
  std::cout << "analyzed " << f.values.size() << " values (" << f.excluded_unmeasurable
            << " unmeasurable rows excluded, " << f.malformed_lines.size() << " malformed)\n";
  for (const auto& m : r.min_entropy) {
    if (m.bin_width == bin_width) {
      std::cout << "min-entropy at " << bin_width << " deg bins: " << m.adjusted_bits << " bits (max "
                << m.max_bits << ")\n";
    }
  }
  return kOk;
}

int cmd_calibrate(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const CalibrationResult r = run_calibration(cfg);
  const fs::path dir = cfg.output_dir;
  Json j = header("calibrate", cfg);
  j["eta"] = r.calibration.eta;
  j["reference_deg"] = r.reference_deg;
  j["mean_theta_deg"] = r.calibration.mean_theta_deg;
  j["raw_mean_theta_deg"] = r.raw_mean_theta_deg;
  j["samples"] = r.calibration.samples;
  write_json(dir / "calibration.json", j);
  std::cout << "eta = " << r.calibration.eta << " (mean theta " << r.raw_mean_theta_deg << " -> "
            << r.calibration.mean_theta_deg << " deg)\n";
  return kOk;
}

int cmd_crossvalidate(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o, o.pulses ? std::nullopt : std::optional<long long>(500));
  const CrossValidation r = run_crossvalidation(cfg);
  Json j = header("crossvalidate", cfg);
  Json gains = Json::array();
  for (const auto& g : r.gains) {
    gains.push_back({{"gain", g.gain},
                     {"fd_mean_energy", g.fd_mean},
                     {"analytic_mean_energy", g.green_mean},
                     {"ratio", g.ratio},
                     {"theta_ks_p", g.ks_p},
                     {"passed", g.passed}});
    std::cout << "G=" << g.gain << ": intensity ratio " << g.ratio << ", theta KS p " << g.ks_p << "\n";
  }
  j["gains"] = gains;
  j["spontaneous"] = {{"gamma_expected", r.spontaneous.gamma_expected},
                      {"gamma_fd", r.spontaneous.gamma_fd},
                      {"gamma_analytic", r.spontaneous.gamma_green},
                      {"passed", r.spontaneous.passed}};
  j["passed"] = r.passed;
  write_json(fs::path(cfg.output_dir) / "crossvalidate_report.json", j);
  std::cout << "spontaneous decay: fd " << r.spontaneous.gamma_fd << ", analytic " << r.spontaneous.gamma_green
            << "\ncrossvalidate: " << (r.passed ? "PASS" : "FAIL") << "\n";
  return r.passed ? kOk : kStatistical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator of randomly polarized Stokes pulses and their analysis"};
  app.require_subcommand(1);

  CommonOptions sim_opts, rep_opts, ana_opts, cal_opts, xv_opts;
  auto* sim = app.add_subcommand("simulate", "simulate pulses and write CSV + metadata");
  add_common(sim, sim_opts, false);

  std::string scenario;
  auto* rep = app.add_subcommand("reproduce", "run a figure/table scenario");
  rep->add_option("scenario", scenario, "fig3, fig4 or table1")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "table1"}));
  add_common(rep, rep_opts, true);

  std::string csv;
  int t_max = 1000;
  double bin_width = 1.0;
  auto* ana = app.add_subcommand("analyze", "histogram, PE battery and min-entropy of a theta CSV");
  ana->add_option("csv", csv, "theta CSV or pulses CSV")->required()->check(CLI::ExistingFile);
  ana->add_option("--t-max", t_max, "largest embedding delay")->check(CLI::PositiveNumber);
  ana->add_option("--bin-width", bin_width, "histogram bin width in degrees");
  add_common(ana, ana_opts, false);

  auto* cal = app.add_subcommand("calibrate", "fit the loss-balance factor eta");
  add_common(cal, cal_opts, false);

  auto* xv = app.add_subcommand("crossvalidate", "compare the finite-difference and analytic solvers");
  add_common(xv, xv_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) return cmd_simulate(sim_opts);
    if (*rep) {
      const ExperimentConfig cfg = resolve(rep_opts);
      if (scenario == "fig3") return cmd_fig3(cfg);
      if (scenario == "fig4") return cmd_fig4(cfg);
      return cmd_table1(cfg);
    }
    if (*ana) return cmd_analyze(csv, ana_opts, t_max, bin_width);
    if (*cal) return cmd_calibrate(cal_opts);
    if (*xv) return cmd_crossvalidate(xv_opts);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
