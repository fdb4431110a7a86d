#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ifo/analytic.hpp"
#include "ifo/runner.hpp"
#include "support/oracles.hpp"

using namespace ifo;
using namespace ifo::runner;

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& leaf) {
  const auto d = fs::temp_directory_path() / "ifo_test_runner" / leaf;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(IFO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string kData = IFO_DATA_DIR;

// Lossless two-mirror cavity tuned onto resonance: singular by construction.
const char* kSingular = R"({
  "preset": "custom",
  "mirrors": {"min_loss": 0},
  "network": {
    "components": [
      {"name": "laser", "type": "laser"},
      {"name": "M1", "type": "mirror", "R": 1, "T": 0},
      {"name": "s", "type": "space", "length_m": 10, "tuning_deg": 90},
      {"name": "M2", "type": "mirror", "R": 1, "T": 0},
      {"name": "DET", "type": "detector"}
    ],
    "connections": [["laser.out", "M1.fr"], ["M1.bk", "s.a"], ["s.b", "M2.fr"], ["M2.bk", "DET.in"]]
  }
})";

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) {
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("mode names") {
  for (const auto& n : mode_names()) CHECK(to_string(mode_from_string(n)) == n);
  CHECK_THROWS_AS(mode_from_string("sing"), ValidationError);
  CHECK(exit_code_for(ResonanceError("x")) == 3);
  CHECK(exit_code_for(SolverError("x")) == 3);
  CHECK(exit_code_for(ValidationError("x")) == 2);
}

TEST_CASE("transmission curves sit on cell centres and peak at the bright fringe") {
  auto c = scenario::parse_scenario("", "gmi", {"transmission.phi_e_points=360"});
  const auto rows = transmission_curve(c, 32.0);
  REQUIRE(rows.size() == 360);
  CHECK(rows.front().phi_e_deg == doctest::Approx(0.5));
  CHECK(rows.back().phi_e_deg == doctest::Approx(359.5));
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].transmission > rows[best].transmission) best = i;
    CHECK(rows[i].transmission ==
          doctest::Approx(oracle::coin_transmission(oracle::deg(32.0), oracle::deg(rows[i].phi_e_deg))).epsilon(1e-9));
  }
  CHECK(std::abs(rows[best].phi_e_deg - 328.0) <= 0.5);
}

TEST_CASE("runs are byte-identical") {
  const auto c = scenario::parse_scenario("", "gmi", {"sweep.points=40"});
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  REQUIRE(run_sweep(c, Mode::Nsr, a.string()).exit_code == 0);
  REQUIRE(run_sweep(c, Mode::Nsr, b.string()).exit_code == 0);
  CHECK(slurp(a / "nsr.csv") == slurp(b / "nsr.csv"));
  CHECK(slurp(a / "nsr.json") == slurp(b / "nsr.json"));
}

TEST_CASE("spectrum schema and divergence rows") {
  const double notch = oracle::first_notch(4000.0);
  const auto c = scenario::parse_scenario(
      "", "mi", {"sweep.spacing=lin", "sweep.f_min_hz=" + format_number(notch / 2.0),
                 "sweep.f_max_hz=" + format_number(notch * 1.5), "sweep.points=3"});
  const auto dir = fresh_dir("schema");
  const auto r = run_sweep(c, Mode::Transfer, dir.string());
  REQUIRE(r.exit_code == 0);
  const auto l = lines(dir / "transfer.csv");
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "frequency_hz,tf_mag_w_per_h,tf_phase_rad,shot_asd_w_rthz,nsr_strain_rthz,diverged");
  CHECK(l[2].find(",inf,1") != std::string::npos);
  CHECK(l[1].substr(l[1].size() - 2) == ",0");
  const auto m = read_json(dir / "transfer.json");
  CHECK(m["divergence_points"].size() == 1);
  CHECK(m["status"] == "ok");
  CHECK(m["mode"] == "transfer");
  CHECK(m["solver"]["tolerances"].contains("residual"));
  CHECK(m["config"]["provenance"]["sweep.points"] == "override");
  bool has_sideband_label = false;
  for (const auto& a : m["approximations"]) has_sideband_label |= a["label"] == "first-order-sidebands";
  CHECK(has_sideband_label);
}

TEST_CASE("power mode lists every probe") {
  const auto c = scenario::parse_scenario("", "gmi-dr");
  const auto dir = fresh_dir("power");
  REQUIRE(run_sweep(c, Mode::Power, dir.string()).exit_code == 0);
  const auto l = lines(dir / "power.csv");
  CHECK(l[0] == "component,power_w");
  std::string all;
  for (const auto& s : l) all += s + "\n";
  for (const char* probe : {"PRM,", "SRM,", "M1,", "M2,", "ETM_N,", "ETM_E,"}) CHECK(all.find(probe) != std::string::npos);
}

TEST_CASE("noise budget from files next to the config") {
  const auto dir = fresh_dir("budget");
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"preset": "gmi", "sweep": {"points": 30},
    "noise": {"frequency_asd": ")" << kData << R"(/laser_frequency_asd.csv", "intensity_asd": ")" << kData
                     << R"(/laser_intensity_asd.csv"}})";
  const auto c = scenario::parse_scenario(cfg.string());
  const auto r = run_sweep(c, Mode::NoiseBudget, (dir / "out").string());
  REQUIRE(r.exit_code == 0);
  const auto l = lines(dir / "out" / "noise_budget.csv");
  CHECK(l[0] ==
        "frequency_hz,shot_strain_rthz,coating_thermal_strain_rthz,laser_frequency_strain_rthz,"
        "laser_intensity_strain_rthz,total_strain_rthz");
  CHECK(l.size() == 31);
}

TEST_CASE("unit mismatch in a noise file is a configuration error") {
  const auto c = scenario::parse_scenario("", "gmi", {"noise.frequency_asd=" + kData + "/laser_intensity_asd.csv"});
  const auto dir = fresh_dir("mismatch");
  const auto r = run_sweep(c, Mode::NoiseBudget, dir.string());
  CHECK(r.exit_code == 2);
  CHECK(r.metadata["status"] == "error");
  CHECK(fs::exists(dir / "noise-budget.json"));
}

TEST_CASE("find-bias") {
  SUBCASE("gain one half is the quadrature bias") {
    const auto c = scenario::parse_scenario("", "gmi", {"find_bias.value=0.5"});
    const auto b = find_bias(c);
    CHECK(b.theta_b_deg == doctest::Approx(90.0).epsilon(1e-12));
  }
  SUBCASE("high gain") {
    const auto c = scenario::parse_scenario("", "gmi", {"find_bias.value=1e6"});
    const auto b = find_bias(c);
    CHECK(b.theta_b_rad == doctest::Approx(std::acos((2e6 - 1.0) / (2e6 + 1.0))).epsilon(1e-9));
    CHECK(b.gain_analytic == doctest::Approx(1e6).epsilon(1e-9));
    CHECK(b.nsr_analytic == doctest::Approx(oracle::shot_nsr(125.0, 1064e-9, 1e6, 4000.0, 100.0)).epsilon(1e-9));
    CHECK(b.nsr_network > 0.0);
  }
  SUBCASE("gain below the reachable range") {
    const auto c = scenario::parse_scenario("", "gmi", {"find_bias.value=1e30"});
    CHECK_THROWS_AS(find_bias(c), ValidationError);
  }
  SUBCASE("nsr target") {
    const auto c0 = scenario::parse_scenario("", "gmi");
    const double at60 = network_nsr_at_bias(c0, oracle::deg(60.0), 100.0);
    const auto c = scenario::parse_scenario("", "gmi", {"find_bias.target=nsr", "find_bias.value=" + format_number(at60)});
    const auto b = find_bias(c);
    CHECK(b.nsr_network == doctest::Approx(at60).epsilon(1e-6));
  }
  CHECK_THROWS_AS(find_bias(scenario::parse_scenario("", "mi")), ValidationError);
}

TEST_CASE("validate mode writes its table") {
  const auto c = scenario::parse_scenario("", "gmi", {"validate.grid=6"});
  const auto dir = fresh_dir("validate");
  CHECK(run_sweep(c, Mode::Validate, dir.string()).exit_code == 0);
  CHECK(lines(dir / "validate.csv")[0] == "check,max_deviation,tolerance,passed");
  const auto bad = scenario::parse_scenario("", "gmi", {"validate.grid=6", "validate.corrupt_splitter=true"});
  CHECK(run_sweep(bad, Mode::Validate, fresh_dir("validate_bad").string()).exit_code == 1);
}

TEST_CASE("singular networks exit with code 3") {
  const auto dir = fresh_dir("singular");
  const auto c = scenario::parse_scenario_text(kSingular);
  const auto r = run_sweep(c, Mode::Power, dir.string());
  CHECK(r.exit_code == 3);
  CHECK_FALSE(r.metadata["errors"].empty());
}

TEST_CASE("command line") {
  const auto dir = fresh_dir("cli");
  CHECK(run_cli("power --preset mi --out " + (dir / "ok").string()) == 0);
  CHECK(fs::exists(dir / "ok" / "power.csv"));
  CHECK(run_cli("power --preset mi --set colour=red --out " + (dir / "bad").string()) == 2);
  CHECK(fs::exists(dir / "bad" / "power.json"));
  CHECK(read_json(dir / "bad" / "power.json")["exit_code"] == 2);

  const auto cfg = dir / "singular.json";
  std::ofstream(cfg) << kSingular;
  CHECK(run_cli("power --config " + cfg.string() + " --out " + (dir / "sing").string()) == 3);
  CHECK(run_cli("fly --out " + (dir / "x").string()) != 0);
  CHECK(run_cli("--list-presets") == 0);
}
