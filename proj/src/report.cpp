#include "ramanpol/report.hpp"
#include "ramanpol/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ramanpol {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  std::istringstream in(s);
  in >> v;
  return in && (in >> std::ws).eof() && std::isfinite(v);
}

}  // namespace

std::string provenance_line(const ExperimentConfig& cfg) {
  return "# seed=" + std::to_string(cfg.seed) + " config_hash=" + cfg.hash();
}

void write_pulses_csv(const std::filesystem::path& path, const ExperimentConfig& cfg, const RunResult& run) {
  auto out = open_out(path);
  out << provenance_line(cfg) << "\n";
  out << "pulse_index,e_h,e_v,theta_deg,measurable\n";
  for (const auto& p : run.pulses) {
    out << p.index << ',' << p.e_h << ',' << p.e_v << ',';
    if (p.measurable) out << p.theta_deg;
    out << ',' << (p.measurable ? 1 : 0) << '\n';
  }
}

void write_theta_csv(const std::filesystem::path& path, const ExperimentConfig& cfg, const RunResult& run) {
  auto out = open_out(path);
  out << provenance_line(cfg) << "\n";
  out << "theta_deg\n";
  for (const auto& p : run.pulses)
    if (p.measurable) out << p.theta_deg << '\n';
}

void write_histogram_csv(const std::filesystem::path& path, const ExperimentConfig& cfg,
                         const std::vector<HistogramBin>& bins) {
  auto out = open_out(path);
  out << provenance_line(cfg) << "\n";
  out << "bin_lo_deg,bin_hi_deg,count\n";
  for (const auto& b : bins) out << b.lo << ',' << b.hi << ',' << b.count << '\n';
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  std::istringstream in(cfg.canonical());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

nlohmann::ordered_json run_summary_json(const RunResult& run) {
  nlohmann::ordered_json j;
  j["pulses"] = run.pulses.size();
  j["measurable"] = static_cast<long long>(run.pulses.size()) - run.unmeasurable;
  j["unmeasurable"] = run.unmeasurable;
  j["mean_energy"] = run.mean_energy;
  j["eta"] = run.eta;
  nlohmann::ordered_json d;
  d["enabled"] = run.digitizer_enabled;
  if (run.digitizer_enabled) {
    d["floor"] = run.digitizer.floor;
    d["ceiling"] = run.digitizer.ceiling;
    d["sigma"] = run.digitizer.sigma;
  }
  j["digitizer"] = d;
  return j;
}

nlohmann::ordered_json pe_report_json(const PeTestReport& r) {
  nlohmann::ordered_json j;
  j["thresholds"] = r.thresholds;
  auto dims = nlohmann::ordered_json::array();
  for (const auto& d : r.dimensions) {
    nlohmann::ordered_json e;
    e["d"] = d.d;
    e["tests"] = d.tests;
    e["skipped"] = d.skipped;
    e["counts_below"] = d.below;
    e["expected"] = d.expected;
    e["band_lo"] = d.band_lo;
    e["band_hi"] = d.band_hi;
    dims.push_back(e);
  }
  j["dimensions"] = dims;
  j["within_bands"] = r.within_bands();
  return j;
}

nlohmann::ordered_json min_entropy_json(const std::vector<MinEntropyReport>& r, double reference_bits) {
  nlohmann::ordered_json j;
  j["reference_bits"] = reference_bits;
  j["note"] =
      "estimates depend on the bin width; the reference figure exceeds log2(90), "
      "so it cannot be reached with 1-degree bins over [0, 90]";
  auto rows = nlohmann::ordered_json::array();
  for (const auto& m : r) {
    nlohmann::ordered_json e;
    e["bin_width"] = m.bin_width;
    e["symbol_count"] = m.symbol_count;
    e["samples"] = m.samples;
    e["most_common_count"] = m.most_common_count;
    e["estimate_bits"] = m.raw_bits;
    e["adjusted_bits"] = m.adjusted_bits;
    e["max_bits"] = m.max_bits;
    e["reference_attainable"] = m.max_bits >= reference_bits;
    rows.push_back(e);
  }
  j["estimates"] = rows;
  return j;
}

nlohmann::ordered_json shuffle_json(const std::vector<ShuffleResult>& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& s : r) {
    nlohmann::ordered_json e;
    e["statistic"] = statistic_name(s.statistic);
    e["observed"] = s.observed;
    e["p_value"] = s.p_value;
    j.push_back(e);
  }
  return j;
}

ThetaFile read_theta_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  ThetaFile f;
  std::string line;
  long long line_no = 0;
  bool seen_data = false;
  int theta_col = 0, flag_col = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split(t);
    if (!seen_data) {
      seen_data = true;
      double probe;
      if (!parse_double(cells[0], probe)) {
        // Header row: locate the θ and measurable columns.
        theta_col = -1;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (cells[i] == "theta_deg" || cells[i] == "theta") theta_col = static_cast<int>(i);
          if (cells[i] == "measurable") flag_col = static_cast<int>(i);
        }
        if (theta_col < 0) {
          if (cells.size() != 1) throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                                                   ": header has no theta_deg column");
          theta_col = 0;
        }
        continue;
      }
    }
    ++f.rows;
    if (static_cast<int>(cells.size()) <= std::max(theta_col, flag_col)) {
      f.malformed_lines.push_back(line_no);
      continue;
    }
    if (flag_col >= 0) {
      if (cells[flag_col] == "0") {
        ++f.excluded_unmeasurable;
        continue;
      }
      if (cells[flag_col] != "1") {
        f.malformed_lines.push_back(line_no);
        continue;
      }
    }
    double v;
    if (!parse_double(cells[theta_col], v) || v < 0.0 || v > 90.0) {
      f.malformed_lines.push_back(line_no);
      continue;
    }
    f.values.push_back(v);
  }
  if (!f.malformed_lines.empty() && f.malformed_lines.size() * 100 > static_cast<std::size_t>(f.rows)) {
    std::ostringstream msg;
    msg << path.string() << ": " << f.malformed_lines.size() << " of " << f.rows
        << " rows malformed (limit 1%); first bad line " << f.malformed_lines.front();
    throw ConfigError(msg.str());
  }
  return f;
}

}  // namespace ramanpol
