#include <gtest/gtest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "ramanpol_cli_test";

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome run(const std::string& args) {
  fs::create_directories(kRoot);
  const fs::path log = kRoot / "last_output.txt";
  const std::string cmd = std::string("\"") + RAMANPOL_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream s;
  s << in.rdbuf();
  o.output = s.str();
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  EXPECT_TRUE(in.good()) << p;
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::create_directories(kRoot);
  const fs::path p = kRoot / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

// Small grid that satisfies the resolution rules at G = 5.
fs::path small_config() {
  return write_file("small.ini", "[grid]\nn_z = 50\nn_tau = 50\n[pump]\ngain = 5\n[run]\npulses = 300\nthreads = 1\n");
}

std::string out_dir(const std::string& name) { return "\"" + (kRoot / name).string() + "\""; }

}  // namespace

TEST(Cli, SimulateIsByteReproducible) {
  const auto cfg = small_config().string();
  ASSERT_EQ(run("simulate --config " + cfg + " --seed 7 --out " + out_dir("sim_a")).code, 0);
  ASSERT_EQ(run("simulate --config " + cfg + " --seed 7 --threads 2 --out " + out_dir("sim_b")).code, 0);
  ASSERT_EQ(run("simulate --config " + cfg + " --seed 8 --out " + out_dir("sim_c")).code, 0);
  for (const char* f : {"pulses.csv", "theta.csv", "metadata.json"}) {
    EXPECT_EQ(slurp(kRoot / "sim_a" / f), slurp(kRoot / "sim_b" / f)) << f;
  }
  EXPECT_NE(slurp(kRoot / "sim_a" / "pulses.csv"), slurp(kRoot / "sim_c" / "pulses.csv"));
  const auto csv = slurp(kRoot / "sim_a" / "pulses.csv");
  EXPECT_EQ(csv.rfind("# seed=7 config_hash=", 0), 0u);
  EXPECT_NE(csv.find("pulse_index,e_h,e_v,theta_deg,measurable"), std::string::npos);
  const auto meta = nlohmann::json::parse(slurp(kRoot / "sim_a" / "metadata.json"));
  EXPECT_EQ(meta["seed"], 7);
  EXPECT_EQ(meta["config_hash"].get<std::string>().size(), 16u);
}

TEST(Cli, HighGainMeasuredThetaIsUniform) {
  // At G = 120 nearly every pulse is fully polarized, so the arm-energy angle
  // inherits the uniform orientation.
  const auto cfg = write_file("high_gain.ini",
                              "[grid]\nn_z = 100\nn_tau = 100\n[pump]\ngain = 120\n[run]\nsolver = analytic\n"
                              "pulses = 10000\n");
  ASSERT_EQ(run("simulate --config \"" + cfg.string() + "\" --out " + out_dir("high_gain")).code, 0);
  std::ifstream in(kRoot / "high_gain" / "theta.csv");
  std::string line;
  std::vector<long long> bins(18, 0);
  long long n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
    ++bins[std::min(17, static_cast<int>(std::stod(line) / 5.0))];
    ++n;
  }
  ASSERT_EQ(n, 10000);
  double chi = 0.0;
  for (long long b : bins) chi += (b - n / 18.0) * (b - n / 18.0) / (n / 18.0);
  // 99th percentile of χ² with 17 degrees of freedom.
  EXPECT_LT(chi, 33.409) << chi;
}

TEST(Cli, ReproduceFig4IsByteReproducible) {
  const auto cfg = small_config().string();
  const auto a = run("reproduce fig4 --config " + cfg + " --out " + out_dir("fig4_a"));
  const auto b = run("reproduce fig4 --config " + cfg + " --out " + out_dir("fig4_b"));
  EXPECT_TRUE(a.code == 0 || a.code == 3) << a.output;
  EXPECT_EQ(a.code, b.code);
  for (const char* f : {"fig4_original.csv", "fig4_rotated.csv", "fig4_expected_density.csv", "fig4_report.json"}) {
    EXPECT_EQ(slurp(kRoot / "fig4_a" / f), slurp(kRoot / "fig4_b" / f)) << f;
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("simulate --no-such-flag").code, 1);
  EXPECT_EQ(run("reproduce fig9").code, 1);
  EXPECT_EQ(run("--help").code, 0);
  const auto bad = write_file("bad.ini", "[pump]\ngain = 5\ncolour = red\n");
  const auto b = run("simulate --config \"" + bad.string() + "\" --out " + out_dir("bad"));
  EXPECT_EQ(b.code, 1);
  EXPECT_NE(b.output.find("unknown key 'colour'"), std::string::npos) << b.output;
  const auto coarse = write_file("coarse.ini", "[grid]\nn_z = 50\nn_tau = 50\n[pump]\ngain = 20\n[run]\npulses = 10\n");
  const auto c = run("simulate --config \"" + coarse.string() + "\" --out " + out_dir("coarse"));
  EXPECT_EQ(c.code, 2) << c.output;
  EXPECT_NE(c.output.find("numerical error"), std::string::npos);
}

TEST(Cli, AnalyzeRejectsMostlyMalformedFile) {
  std::ostringstream text;
  text << "theta_deg\n";
  for (int i = 0; i < 100; ++i) text << (i == 40 || i == 70 ? "garbage" : std::to_string(i % 90 + 0.25)) << "\n";
  const auto p = write_file("malformed.csv", text.str());
  const auto r = run("analyze \"" + p.string() + "\" --out " + out_dir("malformed"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("line 42"), std::string::npos) << r.output;
}

TEST(Cli, AnalyzeConstantSequence) {
  std::ostringstream text;
  text << "theta_deg\n";
  for (int i = 0; i < 3000; ++i) text << "45.5\n";
  const auto p = write_file("constant.csv", text.str());
  const auto r = run("analyze \"" + p.string() + "\" --t-max 20 --out " + out_dir("constant"));
  ASSERT_EQ(r.code, 0) << r.output;
  const auto j = nlohmann::json::parse(slurp(kRoot / "constant" / "analysis.json"));
  bool found = false;
  for (const auto& m : j["min_entropy"]["estimates"]) {
    if (m["bin_width"] == 1.0) {
      EXPECT_EQ(m["adjusted_bits"], 0.0);
      found = true;
    }
  }
  EXPECT_TRUE(found) << j.dump(2);
}

TEST(Cli, CalibrateAgainstDeterministicAxis) {
  const auto cfg = write_file("calibrate.ini",
                              "[crystal]\npolarization_axis = -1 1 1\n[grid]\nn_z = 400\nn_tau = 400\n"
                              "[pump]\ngain = 40\n[run]\npulses = 200\nthreads = 1\n");
  const auto r = run("calibrate --config \"" + cfg.string() + "\" --out " + out_dir("cal"));
  ASSERT_EQ(r.code, 0) << r.output;
  const auto j = nlohmann::json::parse(slurp(kRoot / "cal" / "calibration.json"));
  EXPECT_NEAR(j["eta"].get<double>(), 1.0, 0.02);
  EXPECT_NEAR(j["mean_theta_deg"].get<double>(), 35.3, 0.01);

  const auto lossy = write_file("calibrate_lossy.ini",
                                "[crystal]\npolarization_axis = -1 1 1\n[grid]\nn_z = 400\nn_tau = 400\n"
                                "[pump]\ngain = 40\n[run]\npulses = 200\nthreads = 1\n[detector]\ntransmission_h = 0.7\n");
  ASSERT_EQ(run("calibrate --config \"" + lossy.string() + "\" --out " + out_dir("cal_lossy")).code, 0);
  const auto k = nlohmann::json::parse(slurp(kRoot / "cal_lossy" / "calibration.json"));
  EXPECT_NEAR(k["eta"].get<double>() / j["eta"].get<double>(), 0.7, 1e-6);
}

TEST(Cli, CalibrateRejectsIsotropicSetup) {
  const auto r = run("calibrate --config \"" + small_config().string() + "\" --out " + out_dir("cal_iso"));
  EXPECT_EQ(r.code, 1) << r.output;
}
