#include "ramanpol/experiment.hpp"
#include "ramanpol/errors.hpp"
#include "ramanpol/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace ramanpol {

std::vector<double> RunResult::measured_theta() const {
  std::vector<double> out;
  for (const auto& p : pulses)
    if (p.measurable) out.push_back(p.theta_deg);
  return out;
}

std::vector<double> RunResult::true_theta() const {
  std::vector<double> out;
  for (const auto& p : pulses)
    if (p.sample.valid) out.push_back(p.sample.theta_true_deg);
  return out;
}

double resolve_eta(const ExperimentConfig& cfg) {
  switch (cfg.calibration) {
    case CalibrationMode::kNone: return 1.0;
    case CalibrationMode::kFixed: return cfg.eta;
    case CalibrationMode::kFile: {
      std::ifstream in(cfg.calibration_file);
      if (!in) throw ConfigError("cannot read calibration file " + cfg.calibration_file.string());
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("calibration file " + cfg.calibration_file.string() + ": " + e.what());
      }
      if (!j.contains("eta") || !j["eta"].is_number() || !(j["eta"].get<double>() > 0.0)) {
        throw ConfigError("calibration file " + cfg.calibration_file.string() +
                          ": missing or non-positive \"eta\"");
      }
      return j["eta"].get<double>();
    }
  }
  return 1.0;
}

RunResult measure_pulses(const ExperimentConfig& cfg, const std::vector<PulseSample>& samples,
                         long long first) {
  RunResult r;
  r.eta = resolve_eta(cfg);
  r.digitizer_enabled = cfg.digitizer_enabled;
  std::vector<DetectorEnergies> energies;
  energies.reserve(samples.size());
  double total = 0.0;
  for (const auto& s : samples) {
    energies.push_back(detector_energies(s, cfg.basis_rotation_deg, cfg.transmission_h, cfg.transmission_v));
    total += energies.back().e_h + energies.back().e_v;
  }
  r.mean_energy = samples.empty() ? 0.0 : total / samples.size();
  if (cfg.digitizer_enabled) {
    if (!(r.mean_energy > 0.0)) throw NumericalError("digitizer: run has zero mean energy");
    r.digitizer = DigitizerConfig::relative(r.mean_energy, cfg.floor_rel, cfg.ceiling_rel, cfg.sigma_rel);
  }
  r.pulses.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    MeasuredPulse& p = r.pulses[i];
    p.index = first + static_cast<long long>(i);
    p.sample = samples[i];
    DigitizedReading reading{energies[i].e_h, energies[i].e_v, samples[i].valid};
    if (cfg.digitizer_enabled) {
      reading = apply_digitizer(energies[i], r.digitizer,
                                derive_seed(cfg.seed, streams::kDigitizer, static_cast<std::uint64_t>(p.index)));
      reading.measurable = reading.measurable && samples[i].valid;
    }
    if (reading.measurable && reading.e_h == 0.0 && reading.e_v == 0.0) reading.measurable = false;
    p.e_h = reading.e_h;
    p.e_v = reading.e_v;
    p.measurable = reading.measurable;
    p.theta_deg = p.measurable ? theta_from_energies(std::max(0.0, p.e_h), std::max(0.0, p.e_v), r.eta)
                               : std::numeric_limits<double>::quiet_NaN();
    if (!p.measurable) ++r.unmeasurable;
  }
  return r;
}

RunResult run_pulses(const ExperimentConfig& cfg, long long first) {
  const SimulationSetup setup = make_setup(cfg);
  const auto samples = simulate_pulses(setup, cfg.seed, static_cast<std::size_t>(first),
                                       static_cast<std::size_t>(cfg.pulses), cfg.solver, cfg.threads);
  return measure_pulses(cfg, samples, first);
}

std::vector<HistogramBin> histogram_bins(const std::vector<double>& theta, double width) {
  const auto counts = histogram(theta, width);
  std::vector<HistogramBin> out;
  for (std::size_t i = 0; i < counts.size(); ++i) out.push_back({i * width, (i + 1) * width, counts[i]});
  return out;
}

Fig3Result reproduce_fig3(const ExperimentConfig& cfg, const std::vector<double>& offsets_deg) {
  Fig3Result r;
  for (double off : offsets_deg) {
    ExperimentConfig c = cfg;
    c.polarization_offset_deg = cfg.polarization_offset_deg + off;
    Fig3Offset o;
    o.offset_deg = off;
    o.run = run_pulses(c);
    const auto axial = o.run.true_theta();
    o.circular_std_deg = circular_std(axial, 180.0);
    o.circular_mean_deg = circular_mean(axial, 180.0);
    const auto measured = o.run.measured_theta();
    o.histogram = histogram_bins(measured, 1.0);
    if (measured.size() > 1) {
      const double m = std::accumulate(measured.begin(), measured.end(), 0.0) / measured.size();
      double ss = 0.0;
      for (double v : measured) ss += (v - m) * (v - m);
      o.measured_std_deg = std::sqrt(ss / (measured.size() - 1));
    }
    r.offsets.push_back(std::move(o));
  }
  r.strictly_decreasing = true;
  for (std::size_t i = 1; i < r.offsets.size(); ++i) {
    if (!(r.offsets[i].circular_std_deg < r.offsets[i - 1].circular_std_deg)) r.strictly_decreasing = false;
  }
  return r;
}

Fig4Result reproduce_fig4(const ExperimentConfig& cfg, double rotation_deg) {
  Fig4Result r;
  r.rotation_deg = rotation_deg;
  ExperimentConfig c = cfg;
  c.digitizer_enabled = true;
  r.original = run_pulses(c, 0);
  c.basis_rotation_deg = cfg.basis_rotation_deg + rotation_deg;
  r.rotated = run_pulses(c, cfg.pulses);

  const auto a = r.original.measured_theta();
  const auto b = r.rotated.measured_theta();
  r.original_histogram = histogram_bins(a, 1.0);
  r.rotated_histogram = histogram_bins(b, 1.0);
  std::vector<double> edges;
  for (int k = 0; k <= 90; ++k) edges.push_back(k);
  for (int k = 0; k < 90; ++k) r.density_theta.push_back(k + 0.5);
  // The window scales with the mean total energy, which is also the
  // exponential scale of the model.
  r.density = expected_measured_density(r.density_theta, r.original.digitizer, r.original.mean_energy);
  const auto probs = expected_bin_probabilities(edges, r.original.digitizer, r.original.mean_energy);
  std::vector<long long> counts;
  for (const auto& bin : r.original_histogram) counts.push_back(bin.count);
  r.chi_square = chi_square_gof(counts, probs);
  r.ks = ks_two_sample(a, b);
  r.passed = r.ks.p_value > 0.01 && r.chi_square.p_value > 0.01;
  return r;
}

Table1Result reproduce_table1(const ExperimentConfig& cfg, int t_max) {
  Table1Result r;
  r.run = run_pulses(cfg);
  const auto theta = r.run.measured_theta();
  r.report = pe_battery(theta, {}, t_max, cfg.threads);
  r.passed = r.report.within_bands();
  r.reference_within_bands = true;
  for (const auto& counts : r.reference_counts) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto band = binomial_band(1000, r.report.thresholds[i]);
      if (counts[i] < band.first || counts[i] > band.second) r.reference_within_bands = false;
    }
  }
  return r;
}

CalibrationResult run_calibration(const ExperimentConfig& cfg) {
  const SimulationSetup setup = make_setup(cfg);
  if (transverse_coupling(setup.tensors, setup.pump.polarization).isotropic(1e-9)) {
    throw ConfigError(
        "calibration needs a deterministic-orientation pump (anisotropic transverse gain), "
        "e.g. [crystal] polarization_axis = -1 1 1");
  }
  ExperimentConfig c = cfg;
  c.calibration = CalibrationMode::kNone;
  CalibrationResult r;
  r.reference_deg = cfg.reference_deg;
  r.run = run_pulses(c);
  std::vector<std::pair<double, double>> pairs;
  double raw = 0.0;
  for (const auto& p : r.run.pulses) {
    if (!p.measurable) continue;
    pairs.emplace_back(p.e_h, p.e_v);
    raw += p.theta_deg;
  }
  r.raw_mean_theta_deg = pairs.empty() ? 0.0 : raw / pairs.size();
  r.calibration = calibrate_eta(pairs, cfg.reference_deg);
  return r;
}

double fit_correlation_decay(const std::vector<FieldRealization>& fields, double max_lag) {
  if (fields.empty()) throw InsufficientData("fit_correlation_decay: no realizations");
  const SimGrid& g = fields.front().grid;
  const int nt = g.n_tau;
  const int max_k = std::min(nt / 2, static_cast<int>(std::floor(max_lag / g.dtau() + 1e-9)));
  if (max_k < 2) throw InsufficientData("fit_correlation_decay: lag range below two steps");
  std::vector<double> corr(max_k + 1, 0.0);
  for (const auto& f : fields) {
    for (int k = 0; k <= max_k; ++k) {
      double s = 0.0;
      for (int n = 0; n + k <= nt; ++n) {
        for (int c = 0; c < 2; ++c) s += (f.output[n][c] * std::conj(f.output[n + k][c])).real();
      }
      corr[k] += s / (nt + 1 - k);
    }
  }
  // Least squares of ln C(lag) = c0 - γ·lag.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = 0; k <= max_k; ++k) {
    if (!(corr[k] > 0.0)) break;
    const double x = k * g.dtau(), y = std::log(corr[k] / corr[0]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw NumericalError("fit_correlation_decay: correlation not positive at small lags");
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

CrossValidation run_crossvalidation(const ExperimentConfig& cfg) {
  const SimulationSetup base = make_setup(cfg);
  if (!transverse_coupling(base.tensors, base.pump.polarization).isotropic(1e-9)) {
    throw ConfigError("crossvalidate needs the symmetric configuration (isotropic transverse gain)");
  }
  if (cfg.pulses < 100) throw ConfigError("[run] pulses: crossvalidate needs at least 100 realizations");
  CrossValidation r;
  r.passed = true;
  for (double gain : {cfg.gain, cfg.gain / 4.0}) {
    ExperimentConfig c = cfg;
    c.gain = gain;
    const SimulationSetup setup = make_setup(c);
    const std::size_t n = static_cast<std::size_t>(cfg.pulses);
    const auto fd = simulate_pulses(setup, cfg.seed, 0, n, Solver::kFiniteDifference, cfg.threads);
    const auto green = simulate_pulses(setup, cfg.seed, 0, n, Solver::kGreen, cfg.threads);
    const auto green_indep = simulate_pulses(setup, cfg.seed, n, n, Solver::kGreen, cfg.threads);
    CrossGain x;
    x.gain = gain;
    std::vector<double> ta, tb;
    for (const auto& s : fd) {
      x.fd_mean += s.energy / n;
      if (s.valid) ta.push_back(s.theta_true_deg);
    }
    for (const auto& s : green) x.green_mean += s.energy / n;
    for (const auto& s : green_indep)
      if (s.valid) tb.push_back(s.theta_true_deg);
    x.ratio = x.fd_mean / x.green_mean;
    x.ks_p = ks_two_sample(ta, tb).p_value;
    x.passed = std::abs(x.ratio - 1.0) <= 0.05 && x.ks_p > 0.01;
    r.passed = r.passed && x.passed;
    r.gains.push_back(x);
  }

  // Spontaneous limit: negligible gain, long window so the decay is resolved.
  SimulationSetup spont = base;
  spont.grid.n_z = 20;
  spont.grid.window = 10.0 / spont.noise.gamma;
  spont.grid.n_tau = 200;
  spont.pump.gain_scale = gain_scale_for_total_gain(1e-6, spont.pump.envelope, spont.grid.window,
                                                    spont.grid.length);
  const int n = std::max<long long>(cfg.pulses, 100);
  std::vector<FieldRealization> fd(n), green(n);
  const GreenPropagator gp(spont);
  for (int i = 0; i < n; ++i) {
    const auto noise = sample_noise(spont.grid, spont.noise, derive_seed(cfg.seed, streams::kNoise, i));
    fd[i] = propagate_fd(spont, noise);
    green[i] = gp.propagate(noise);
  }
  r.spontaneous.gamma_expected = spont.noise.gamma;
  r.spontaneous.gamma_fd = fit_correlation_decay(fd, 1.0 / spont.noise.gamma);
  r.spontaneous.gamma_green = fit_correlation_decay(green, 1.0 / spont.noise.gamma);
  auto close = [&](double v) { return std::abs(v / spont.noise.gamma - 1.0) <= 0.05; };
  r.spontaneous.passed = close(r.spontaneous.gamma_fd) && close(r.spontaneous.gamma_green);
  r.passed = r.passed && r.spontaneous.passed;
  return r;
}

AnalysisResult analyze_sequence(const std::vector<double>& theta, int t_max, double bin_width,
                                int threads, std::uint64_t seed) {
  ThetaSequence seq;
  seq.values = theta;
  seq.validate();
  AnalysisResult r;
  r.histogram = histogram_bins(theta, bin_width);
  r.pe = pe_battery(theta, {}, t_max, threads);
  std::vector<double> widths{0.5, 1.0, 2.0, 3.0, 5.0, 10.0};
  if (std::find(widths.begin(), widths.end(), bin_width) == widths.end()) widths.push_back(bin_width);
  std::sort(widths.begin(), widths.end());
  if (theta.size() >= 1000) {
    for (double w : widths) r.min_entropy.push_back(min_entropy_mcv(theta, w));
  }
  const ShuffleStatistic stats[] = {ShuffleStatistic::kLag1Autocorrelation, ShuffleStatistic::kRunsCount,
                                    ShuffleStatistic::kLongestRun, ShuffleStatistic::kMean};
  r.shuffle = shuffle_iid_check(theta, stats, 1000, seed);
  return r;
}

}  // namespace ramanpol
