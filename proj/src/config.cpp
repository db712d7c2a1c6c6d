#include "ramanpol/config.hpp"
#include "ramanpol/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace ramanpol {

namespace pt = boost::property_tree;

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"crystal", {"propagation", "reference_axis", "polarization_offset_deg", "polarization_axis"}},
      {"grid", {"n_z", "n_tau", "length", "window"}},
      {"pump", {"gain", "envelope", "center", "width"}},
      {"noise", {"gamma", "rho", "quadrature", "initial_variance_scale"}},
      {"run", {"pulses", "seed", "threads", "solver"}},
      {"detector", {"basis_rotation_deg", "transmission_h", "transmission_v"}},
      {"digitizer", {"enabled", "floor_rel", "ceiling_rel", "sigma_rel"}},
      {"calibration", {"mode", "eta", "file", "reference_deg"}},
      {"output", {"dir"}},
  };
  return keys;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw ConfigError("[" + key.substr(0, key.find('.')) + "] " + key.substr(key.find('.') + 1) +
                    ": expected " + expected + ", got '" + value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  double x;
  if (!(in >> x) || !(in >> std::ws).eof() || !std::isfinite(x)) bad_value(key, v, "a number");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  long long x;
  if (!(in >> x) || !(in >> std::ws).eof()) bad_value(key, v, "an integer");
  return x;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  if (!v.empty() && v[0] == '-') bad_value(key, v, "a non-negative integer");
  std::istringstream in(v);
  std::uint64_t x;
  if (!(in >> x) || !(in >> std::ws).eof()) bad_value(key, v, "a non-negative integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "true or false");
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  Vec3 x;
  if (!(in >> x[0] >> x[1] >> x[2]) || !(in >> std::ws).eof()) bad_value(key, v, "three numbers");
  return x;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::string fmt(const Vec3& v) { return fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]); }

const char* solver_name(Solver s) { return s == Solver::kGreen ? "analytic" : "fd"; }

const char* calibration_name(CalibrationMode m) {
  switch (m) {
    case CalibrationMode::kNone: return "none";
    case CalibrationMode::kFixed: return "fixed";
    case CalibrationMode::kFile: return "file";
  }
  return "none";
}

ExperimentConfig from_tree(const pt::ptree& tree) {
  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (!body.data().empty()) throw ConfigError("key '" + section + "' outside any section");
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("[" + section + "] unknown key '" + key + "'");
      (void)value;
    }
  }
  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  };
  if (auto v = get("crystal.propagation")) c.propagation = to_vec3("crystal.propagation", *v);
  if (auto v = get("crystal.reference_axis")) c.reference_axis = to_vec3("crystal.reference_axis", *v);
  if (auto v = get("crystal.polarization_offset_deg"))
    c.polarization_offset_deg = to_double("crystal.polarization_offset_deg", *v);
  if (auto v = get("crystal.polarization_axis")) c.polarization_axis = to_vec3("crystal.polarization_axis", *v);

  auto int_field = [&](const char* key, int& dst) {
    if (auto v = get(key)) {
      const long long x = to_integer(key, *v);
      if (x < INT32_MIN || x > INT32_MAX) bad_value(key, *v, "a 32-bit integer");
      dst = static_cast<int>(x);
    }
  };
  auto real_field = [&](const char* key, double& dst) {
    if (auto v = get(key)) dst = to_double(key, *v);
  };
  int_field("grid.n_z", c.grid.n_z);
  int_field("grid.n_tau", c.grid.n_tau);
  real_field("grid.length", c.grid.length);
  real_field("grid.window", c.grid.window);

  real_field("pump.gain", c.gain);
  if (auto v = get("pump.envelope")) c.envelope = *v;
  real_field("pump.center", c.envelope_center);
  real_field("pump.width", c.envelope_width);

  real_field("noise.gamma", c.noise.gamma);
  real_field("noise.rho", c.noise.rho);
  real_field("noise.initial_variance_scale", c.noise.initial_variance_scale);
  if (auto v = get("noise.quadrature")) {
    if (*v == "in_phase") {
      c.noise.quadrature = NoiseQuadrature::kInPhase;
    } else if (*v == "circular") {
      c.noise.quadrature = NoiseQuadrature::kCircular;
    } else {
      bad_value("noise.quadrature", *v, "in_phase or circular");
    }
  }

  if (auto v = get("run.pulses")) c.pulses = to_integer("run.pulses", *v);
  if (auto v = get("run.seed")) c.seed = to_unsigned("run.seed", *v);
  int_field("run.threads", c.threads);
  if (auto v = get("run.solver")) {
    if (*v == "fd") {
      c.solver = Solver::kFiniteDifference;
    } else if (*v == "analytic") {
      c.solver = Solver::kGreen;
    } else {
      bad_value("run.solver", *v, "fd or analytic");
    }
  }

  real_field("detector.basis_rotation_deg", c.basis_rotation_deg);
  real_field("detector.transmission_h", c.transmission_h);
  real_field("detector.transmission_v", c.transmission_v);

  if (auto v = get("digitizer.enabled")) c.digitizer_enabled = to_bool("digitizer.enabled", *v);
  real_field("digitizer.floor_rel", c.floor_rel);
  real_field("digitizer.ceiling_rel", c.ceiling_rel);
  real_field("digitizer.sigma_rel", c.sigma_rel);

  if (auto v = get("calibration.mode")) {
    if (*v == "none") {
      c.calibration = CalibrationMode::kNone;
    } else if (*v == "fixed") {
      c.calibration = CalibrationMode::kFixed;
    } else if (*v == "file") {
      c.calibration = CalibrationMode::kFile;
    } else {
      bad_value("calibration.mode", *v, "none, fixed or file");
    }
  }
  real_field("calibration.eta", c.eta);
  if (auto v = get("calibration.file")) c.calibration_file = *v;
  real_field("calibration.reference_deg", c.reference_deg);

  if (auto v = get("output.dir")) c.output_dir = *v;
  c.validate();
  return c;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (propagation.norm() == 0.0) fail("[crystal] propagation: zero vector");
  if (reference_axis.cross(propagation).norm() < 1e-9 * reference_axis.norm() * propagation.norm()) {
    fail("[crystal] reference_axis: must not be parallel to the propagation direction");
  }
  if (polarization_axis && polarization_axis->norm() == 0.0) fail("[crystal] polarization_axis: zero vector");
  if (grid.n_z < 2 || grid.n_tau < 2) fail("[grid] n_z and n_tau must be >= 2");
  if (!(grid.length > 0.0) || !(grid.window > 0.0)) fail("[grid] length and window must be positive");
  if (!(gain >= 0.0)) fail("[pump] gain: must be >= 0");
  if (envelope != "flat" && envelope != "gaussian") fail("[pump] envelope: expected flat or gaussian");
  if (envelope == "gaussian" && !(envelope_width > 0.0)) fail("[pump] width: must be positive");
  if (!(noise.gamma > 0.0)) fail("[noise] gamma: must be positive");
  if (!(noise.rho > 0.0)) fail("[noise] rho: must be positive");
  if (!(noise.initial_variance_scale >= 0.0)) fail("[noise] initial_variance_scale: must be >= 0");
  if (pulses < 1) fail("[run] pulses: must be >= 1");
  if (threads < 0) fail("[run] threads: must be >= 0 (0 = all cores)");
  if (!(transmission_h > 0.0) || !(transmission_v > 0.0)) fail("[detector] transmissions must be positive");
  if (!(floor_rel >= 0.0) || !(ceiling_rel > floor_rel)) fail("[digitizer] need 0 <= floor_rel < ceiling_rel");
  if (!(sigma_rel >= 0.0)) fail("[digitizer] sigma_rel: must be >= 0");
  if (!(eta > 0.0)) fail("[calibration] eta: must be positive");
  if (calibration == CalibrationMode::kFile && calibration_file.empty()) {
    fail("[calibration] file: required when mode = file");
  }
  if (!(reference_deg > 0.0 && reference_deg < 90.0)) fail("[calibration] reference_deg: must be in (0, 90)");
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv{
      {"crystal.propagation", fmt(propagation)},
      {"crystal.reference_axis", fmt(reference_axis)},
      {"crystal.polarization_offset_deg", fmt(polarization_offset_deg)},
      {"crystal.polarization_axis", polarization_axis ? fmt(*polarization_axis) : "none"},
      {"grid.n_z", std::to_string(grid.n_z)},
      {"grid.n_tau", std::to_string(grid.n_tau)},
      {"grid.length", fmt(grid.length)},
      {"grid.window", fmt(grid.window)},
      {"pump.gain", fmt(gain)},
      {"pump.envelope", envelope},
      {"pump.center", fmt(envelope_center)},
      {"pump.width", fmt(envelope_width)},
      {"noise.gamma", fmt(noise.gamma)},
      {"noise.rho", fmt(noise.rho)},
      {"noise.quadrature", noise.quadrature == NoiseQuadrature::kInPhase ? "in_phase" : "circular"},
      {"noise.initial_variance_scale", fmt(noise.initial_variance_scale)},
      {"run.pulses", std::to_string(pulses)},
      {"run.seed", std::to_string(seed)},
      {"run.solver", solver_name(solver)},
      {"detector.basis_rotation_deg", fmt(basis_rotation_deg)},
      {"detector.transmission_h", fmt(transmission_h)},
      {"detector.transmission_v", fmt(transmission_v)},
      {"digitizer.enabled", digitizer_enabled ? "true" : "false"},
      {"digitizer.floor_rel", fmt(floor_rel)},
      {"digitizer.ceiling_rel", fmt(ceiling_rel)},
      {"digitizer.sigma_rel", fmt(sigma_rel)},
      {"calibration.mode", calibration_name(calibration)},
      {"calibration.eta", fmt(eta)},
      {"calibration.file", calibration_file.string()},
      {"calibration.reference_deg", fmt(reference_deg)},
  };
  // Thread count and output directory do not affect the data.
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string ExperimentConfig::hash() const {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(canonical());
  return out.str();
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream msg;
    msg << origin << ":" << e.line() << ": " << e.message();
    throw ConfigError(msg.str());
  }
  try {
    return from_tree(tree);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

double pump_angle_deg(const ExperimentConfig& cfg) {
  if (!cfg.polarization_axis) return cfg.polarization_offset_deg;
  const Vec3 lab = lab_basis(cfg.propagation, cfg.reference_axis).apply(cfg.polarization_axis->normalized());
  if (std::abs(lab[2]) > 1e-9) {
    throw ConfigError("[crystal] polarization_axis: not perpendicular to the propagation direction");
  }
  return std::atan2(lab[1], lab[0]) * 180.0 / std::numbers::pi + cfg.polarization_offset_deg;
}

SimulationSetup make_setup(const ExperimentConfig& cfg) {
  cfg.validate();
  SimulationSetup s;
  s.tensors = rotate_tensor_set(f2g_tensors(1.0), lab_basis(cfg.propagation, cfg.reference_axis));
  const PumpEnvelope env = cfg.envelope == "gaussian"
                               ? PumpEnvelope::gaussian(cfg.envelope_center, cfg.envelope_width)
                               : PumpEnvelope::flat();
  s.grid = cfg.grid;
  s.noise = cfg.noise;
  s.pump = PumpConfig::transverse(pump_angle_deg(cfg) * std::numbers::pi / 180.0, env,
                                  gain_scale_for_total_gain(cfg.gain, env, cfg.grid.window, cfg.grid.length));
  s.validate();
  return s;
}

}  // namespace ramanpol
