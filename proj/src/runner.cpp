#include "ifo/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "ifo/analytic.hpp"
#include "ifo/noise.hpp"
#include "ifo/solver.hpp"
#include "ifo/spectrum.hpp"

namespace ifo::runner {

namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "0.1.0";

json number_or_token(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& header) : out_(path, std::ios::binary) {
    if (!out_) throw ValidationError("cannot write '" + path.string() + "'");
    out_ << header << "\n";
  }
  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << "\n";
  }
  void close() {
    out_.close();
    if (!out_) throw ValidationError("failed writing CSV output");
  }

 private:
  static std::string cell(double x) { return format_number(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(bool b) { return b ? "1" : "0"; }
  std::ofstream out_;
};

std::string degree_tag(double deg) {
  std::string s = format_number(deg);
  std::replace(s.begin(), s.end(), '-', 'm');
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

json solver_tolerances() {
  return {{"residual", net::kResidualTolerance},
          {"condition_warning", net::kConditionWarning},
          {"condition_singular", net::kConditionSingular},
          {"resonance_denominator", kSingularityEpsilon},
          {"notch_sine", net::kNotchSine},
          {"validation_transmission_abs", net::kTransmissionTolerance},
          {"validation_spectral_rel", net::kSpectralTolerance}};
}

json approximation(const std::string& label, const std::string& detail) {
  return {{"label", label}, {"detail", detail}};
}

json min_loss_label(const ScenarioConfig& c) {
  std::ostringstream os;
  if (c.min_loss > 0.0) {
    os << "every mirror and splitter carries at least " << format_number(c.min_loss)
       << " power loss so lossless resonances stay invertible";
  } else {
    os << "inactive (floor 0); lossless surfaces are solved exactly";
  }
  return approximation("minimum-loss-floor", os.str());
}

json shot_label() {
  return approximation("shot-noise-at-detector",
                       "quantum noise is the shot noise of the DC readout power, sqrt(2 hbar w0 P_DC); "
                       "radiation pressure and squeezing are not modelled");
}

json sideband_label() {
  return approximation("first-order-sidebands",
                       "GW and laser-noise modulation enter as first-order sidebands at w0 +/- w; "
                       "the readout is conj(E_c) E_u + E_c conj(E_l)");
}

json solve_report_json(const net::SolveReport& r) {
  return {{"condition_estimate", r.condition_estimate}, {"residual", r.residual}, {"warnings", r.warnings}};
}

void append(json& list, const std::vector<std::string>& items) {
  for (const auto& s : items) list.push_back(s);
}

fs::path resolve_input(const ScenarioConfig& c, const std::string& path) {
  fs::path p(path);
  if (p.is_relative() && !c.source_path.empty()) {
    const fs::path near_config = fs::path(c.source_path).parent_path() / p;
    if (fs::exists(near_config)) return near_config;
  }
  return p;
}

ScenarioConfig rebiased(const ScenarioConfig& config, double theta_rad) {
  ScenarioConfig c = config;
  c.phi_n_deg = rad_to_deg(theta_rad);
  c.phi_e_deg = -rad_to_deg(theta_rad);
  return c;
}

double end_reflectance(const ScenarioConfig& c) { return 1.0 - c.end_T - std::max(c.mirror_loss, c.min_loss); }

// ---------------------------------------------------------------------------
// Modes

void run_transmission(const ScenarioConfig& c, const fs::path& dir, RunResult& res) {
  json curves = json::array();
  for (double phi_n : c.transmission_phi_n_deg) {
    std::vector<std::string> notes;
    const auto rows = transmission_curve(c, phi_n, &notes);
    const std::string name = "transmission_phi_n_" + degree_tag(phi_n) + ".csv";
    CsvFile csv(dir / name, "phi_e_deg,transmission");
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      csv.row(rows[i].phi_e_deg, rows[i].transmission);
      if (!(rows[best].transmission >= rows[i].transmission)) best = i;
    }
    csv.close();
    res.outputs.push_back(name);
    append(res.metadata["warnings"], notes);
    curves.push_back({{"phi_n_deg", phi_n},
                      {"file", name},
                      {"peak_phi_e_deg", rows[best].phi_e_deg},
                      {"peak_transmission", number_or_token(rows[best].transmission)},
                      {"expected_peak_phi_e_deg", std::fmod(360.0 - std::fmod(phi_n, 360.0), 360.0)}});
  }
  res.metadata["results"] = {{"curves", curves}};
}

void run_spectrum(const ScenarioConfig& c, Mode mode, const fs::path& dir, RunResult& res) {
  const auto net = scenario::build_network(c);
  const CarrierParams carrier = c.carrier();
  const auto rows = mode == Mode::Transfer ? net::gw_transfer_spectrum(net, carrier, c.sweep())
                                           : net::nsr_spectrum(net, carrier, c.sweep());
  const std::string name = to_string(mode) + ".csv";
  CsvFile csv(dir / name, "frequency_hz,tf_mag_w_per_h,tf_phase_rad,shot_asd_w_rthz,nsr_strain_rthz,diverged");
  json divergences = json::array();
  for (const auto& r : rows) {
    csv.row(r.frequency_hz, r.tf_mag, r.tf_phase, r.shot_asd, r.nsr, r.diverged);
    if (r.diverged) divergences.push_back(r.frequency_hz);
  }
  csv.close();
  res.outputs.push_back(name);
  res.metadata["divergence_points"] = divergences;

  const auto cs = net::solve_carrier(net, carrier);
  res.metadata["solver"]["carrier"] = solve_report_json(cs.report());
  append(res.metadata["warnings"], cs.report().warnings);
  const double L = net::gw_arm_length(net);
  res.metadata["results"] = {{"dc_power_w", net::read_detector(cs).dc_power},
                             {"gw_arm_length_m", L},
                             {"first_notch_hz", L > 0.0 ? json(analytic::first_notch_frequency(L)) : json(nullptr)}};
  res.metadata["approximations"].push_back(shot_label());
  res.metadata["approximations"].push_back(sideband_label());
}

void run_power(const ScenarioConfig& c, const fs::path& dir, RunResult& res) {
  const auto net = scenario::build_network(c);
  const auto cs = net::solve_carrier(net, c.carrier());
  const auto budget = net::power_budget(cs);
  CsvFile csv(dir / "power.csv", "component,power_w");
  json table = json::object();
  for (const auto& [label, p] : budget) {
    csv.row(label, p);
    table[label] = p;
  }
  csv.close();
  res.outputs.push_back("power.csv");
  res.metadata["solver"]["carrier"] = solve_report_json(cs.report());
  append(res.metadata["warnings"], cs.report().warnings);
  res.metadata["results"] = {{"incident_power_w", table},
                             {"probe_ports", net.probes()},
                             {"readout_power_w", net::read_detector(cs).dc_power},
                             {"absorbed_power_w", cs.absorbed_power()},
                             {"exiting_power_w", cs.exiting_power()}};
}

void run_noise_budget(const ScenarioConfig& c, const fs::path& dir, RunResult& res) {
  const auto net = scenario::build_network(c);
  const CarrierParams carrier = c.carrier();
  const auto grid = c.sweep().grid();
  const auto rows = net::spectrum_at(net, carrier, grid);
  std::vector<double> gw_mag;
  for (const auto& r : rows) gw_mag.push_back(r.diverged ? 0.0 : r.tf_mag);

  std::vector<std::string> warnings;
  std::vector<noise::NoiseASD> parts{noise::shot_floor(rows)};
  if (c.include_ctn) parts.push_back(noise::ctn_curve(grid, c.ctn_length_m));
  json sources = json::array();
  const std::pair<const std::string*, net::LaserNoiseKind> laser_inputs[] = {
      {&c.frequency_asd, net::LaserNoiseKind::Frequency}, {&c.intensity_asd, net::LaserNoiseKind::Intensity}};
  for (const auto& [path, kind] : laser_inputs) {
    if (path->empty()) continue;
    const fs::path file = resolve_input(c, *path);
    const auto asd = noise::read_asd_csv(file.string());
    const auto tf = net::laser_noise_spectrum(net, carrier, grid, kind);
    parts.push_back(noise::project_laser_noise(asd, kind, grid, tf, gw_mag, &warnings));
    sources.push_back({{"kind", net::to_string(kind)}, {"file", file.string()}, {"unit", noise::to_string(asd.unit())}});
  }
  const auto budget = noise::compose_budget(parts, grid, &warnings);

  std::string header = "frequency_hz";
  for (const auto& n : budget.names) header += "," + n + "_strain_rthz";
  header += ",total_strain_rthz";
  std::ofstream out(dir / "noise_budget.csv", std::ios::binary);
  if (!out) throw ValidationError("cannot write noise_budget.csv");
  out << header << "\n";
  json divergences = json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_number(grid[i]);
    for (const auto& col : budget.columns) out << "," << format_number(col[i]);
    out << "," << format_number(budget.total[i]) << "\n";
    if (rows[i].diverged) divergences.push_back(grid[i]);
  }
  if (!out) throw ValidationError("failed writing noise_budget.csv");
  res.outputs.push_back("noise_budget.csv");
  res.metadata["divergence_points"] = divergences;
  append(res.metadata["warnings"], warnings);
  res.metadata["results"] = {{"sources", budget.names}, {"laser_inputs", sources}};
  res.metadata["approximations"].push_back(shot_label());
  res.metadata["approximations"].push_back(sideband_label());
  if (c.include_ctn) {
    res.metadata["approximations"].push_back(
        approximation("coating-thermal-unity-transfer",
                      "mirror motion couples to differential arm length with unit transfer"));
  }
}

void run_validate(const ScenarioConfig& c, const fs::path& dir, RunResult& res) {
  net::ValidationOptions o;
  o.grid = c.validate_grid;
  o.bias = deg_to_rad(c.phi_n_deg);
  o.length = 0.5 * (c.length_n_m + c.length_e_m);
  o.carrier = c.carrier();
  o.sweep = c.sweep();
  o.corrupt_splitter = c.validate_corrupt_splitter;
  const auto rep = net::validate_against_analytic(o);

  struct Check {
    const char* name;
    double dev;
    double tol;
  };
  const Check checks[] = {
      {"transmission", rep.transmission_dev, net::kTransmissionTolerance},
      {"mi_transfer", rep.mi_transfer_dev, net::kSpectralTolerance},
      {"mi_nsr", rep.mi_nsr_dev, net::kSpectralTolerance},
      {"gmi_transfer", rep.gmi_transfer_dev, net::kSpectralTolerance},
      {"gmi_nsr", rep.gmi_nsr_dev, net::kSpectralTolerance},
  };
  CsvFile csv(dir / "validate.csv", "check,max_deviation,tolerance,passed");
  for (const auto& ch : checks) csv.row(std::string(ch.name), ch.dev, ch.tol, ch.dev <= ch.tol);
  csv.close();
  res.outputs.push_back("validate.csv");
  res.metadata["results"] = {{"grid_points", rep.grid_points},
                             {"passed", rep.passed},
                             {"failures", rep.failures},
                             {"corrupt_splitter", c.validate_corrupt_splitter}};
  res.metadata["approximations"].push_back(sideband_label());
  if (!rep.passed) {
    for (const auto& f : rep.failures) res.metadata["errors"].push_back(f);
    res.exit_code = 1;
  }
}

void run_find_bias(const ScenarioConfig& c, const fs::path& dir, RunResult& res) {
  const BiasReport b = find_bias(c);
  CsvFile csv(dir / "find_bias.csv",
              "target,requested,frequency_hz,theta_b_deg,gain_analytic,nsr_analytic,nsr_network,disagreement");
  csv.row(b.target, b.requested, b.frequency_hz, b.theta_b_deg, b.gain_analytic, b.nsr_analytic, b.nsr_network,
          b.disagreement);
  csv.close();
  res.outputs.push_back("find_bias.csv");
  res.metadata["results"] = {{"target", b.target},
                             {"requested", b.requested},
                             {"frequency_hz", b.frequency_hz},
                             {"theta_b_rad", b.theta_b_rad},
                             {"theta_b_deg", b.theta_b_deg},
                             {"gain_analytic", number_or_token(b.gain_analytic)},
                             {"nsr_analytic", number_or_token(b.nsr_analytic)},
                             {"nsr_network", number_or_token(b.nsr_network)},
                             {"disagreement", number_or_token(b.disagreement)}};
  res.metadata["approximations"].push_back(shot_label());
  res.metadata["approximations"].push_back(sideband_label());
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& mode_names() {
  static const std::vector<std::string> names{"transmission", "transfer",  "nsr",     "power",
                                              "noise-budget", "validate", "find-bias"};
  return names;
}

Mode mode_from_string(const std::string& name) {
  const auto& names = mode_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ValidationError("unknown mode '" + name + "'");
  return static_cast<Mode>(it - names.begin());
}

std::string to_string(Mode mode) { return mode_names().at(static_cast<std::size_t>(mode)); }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ResonanceError*>(&e) || dynamic_cast<const SolverError*>(&e)) return 3;
  return 2;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::vector<TransmissionRow> transmission_curve(const ScenarioConfig& config, double phi_n_deg,
                                                std::vector<std::string>* notes) {
  const std::size_t n = config.transmission_points;
  if (n < 2) throw ValidationError("transmission sweep needs at least 2 points");
  ScenarioConfig c = config;
  c.phi_n_deg = phi_n_deg;
  const CarrierParams carrier = c.carrier();
  std::vector<TransmissionRow> rows(n);
  for (std::size_t k = 0; k < n; ++k) {
    c.phi_e_deg = 360.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    rows[k].phi_e_deg = c.phi_e_deg;
    try {
      const auto net = scenario::build_network(c);
      rows[k].transmission = net::read_detector(net::solve_carrier(net, carrier)).dc_power / carrier.power();
    } catch (const ResonanceError& e) {
      rows[k].transmission = std::numeric_limits<double>::quiet_NaN();
      if (notes) notes->push_back("phi_N = " + format_number(phi_n_deg) + " deg, phi_E = " +
                                  format_number(c.phi_e_deg) + " deg: " + e.what());
    }
  }
  return rows;
}

double network_nsr_at_bias(const ScenarioConfig& config, double theta_rad, double f_hz) {
  const ScenarioConfig c = rebiased(config, theta_rad);
  const auto net = scenario::build_network(c);
  const auto rows = net::spectrum_at(net, c.carrier(), {f_hz});
  return rows.front().nsr;
}

BiasReport find_bias(const ScenarioConfig& c) {
  if (!c.grover_family() || c.preset == "custom") {
    throw ValidationError("find-bias needs a Grover-Michelson preset, got '" + c.preset + "'");
  }
  const CarrierParams carrier = c.carrier();
  const double L = 0.5 * (c.length_n_m + c.length_e_m);
  const double f = c.find_bias_frequency_hz;
  const double notch = analytic::first_notch_frequency(L);
  if (!(f < notch)) {
    throw ValidationError("find-bias frequency " + format_number(f) + " Hz is not below the first notch at " +
                          format_number(notch) + " Hz");
  }
  const double lo = deg_to_rad(c.find_bias_min_deg);
  const double hi = constants::pi / 2.0;

  BiasReport b;
  b.target = c.find_bias_target;
  b.requested = c.find_bias_value;
  b.frequency_hz = f;

  if (b.target == "gain") {
    if (!(std::isfinite(b.requested) && b.requested > 0.0)) {
      throw ValidationError("target gain must be positive and finite");
    }
    b.theta_b_rad = analytic::bias_for_gain(b.requested);
    if (b.theta_b_rad < lo) {
      throw ValidationError("gain " + format_number(b.requested) + " needs a bias of " +
                            format_number(rad_to_deg(b.theta_b_rad)) + " deg, below find_bias.min_bias_deg = " +
                            format_number(c.find_bias_min_deg));
    }
  } else {
    if (!(std::isfinite(b.requested) && b.requested > 0.0)) {
      throw ValidationError("target NSR must be positive and finite");
    }
    auto nsr = [&](double th) { return network_nsr_at_bias(c, th, f); };

    // Golden-section search for the most sensitive bias on [lo, hi].
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, d = hi;
    double x1 = d - g * (d - a), x2 = a + g * (d - a);
    double f1 = nsr(x1), f2 = nsr(x2);
    while (d - a > 1e-12 * std::max(1.0, d)) {
      if (f1 <= f2) {
        d = x2;
        x2 = x1;
        f2 = f1;
        x1 = d - g * (d - a);
        f1 = nsr(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (d - a);
        f2 = nsr(x2);
      }
    }
    double best = 0.5 * (a + d);
    double best_nsr = nsr(best);
    const double nsr_lo = nsr(lo);
    if (nsr_lo < best_nsr) {
      best = lo;
      best_nsr = nsr_lo;
    }
    if (b.requested < best_nsr) {
      throw ValidationError("target NSR " + format_number(b.requested) + " /rtHz at " + format_number(f) +
                            " Hz is below the best reachable " + format_number(best_nsr) + " /rtHz (bias " +
                            format_number(rad_to_deg(best)) + " deg) for bias in [" +
                            format_number(c.find_bias_min_deg) + ", 90] deg");
    }
    const double nsr_hi = nsr(hi);
    if (b.requested > nsr_hi) {
      throw ValidationError("target NSR " + format_number(b.requested) + " /rtHz is above the least sensitive " +
                            "operating point on the bias range (" + format_number(nsr_hi) + " /rtHz at 90 deg)");
    }
    // Bisection on the rising branch between the optimum and 90 degrees.
    double left = best, right = hi;
    for (int i = 0; i < 200 && right - left > 1e-15; ++i) {
      const double mid = 0.5 * (left + right);
      (nsr(mid) < b.requested ? left : right) = mid;
    }
    b.theta_b_rad = 0.5 * (left + right);
  }

  b.theta_b_deg = rad_to_deg(b.theta_b_rad);
  b.gain_analytic = analytic::power_gain(b.theta_b_rad, end_reflectance(c));
  b.nsr_analytic = analytic::gm_nsr(carrier, b.gain_analytic, L, f).value;
  b.nsr_network = network_nsr_at_bias(c, b.theta_b_rad, f);
  b.disagreement = std::abs(b.nsr_network / b.nsr_analytic - 1.0);
  return b;
}

json error_metadata(const std::string& mode, const std::string& message, int exit_code) {
  return {{"mode", mode},
          {"tool_version", kToolVersion},
          {"status", "error"},
          {"exit_code", exit_code},
          {"errors", json::array({message})}};
}

void write_metadata(const std::string& out_dir, const std::string& mode, const json& metadata) {
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / (mode + ".json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << metadata.dump(2) << "\n";
}

RunResult run_sweep(const ScenarioConfig& config, Mode mode, const std::string& out_dir) {
  RunResult res;
  json& m = res.metadata;
  m["mode"] = to_string(mode);
  m["tool_version"] = kToolVersion;
  m["config"] = config.to_json();
  m["solver"] = {{"tolerances", solver_tolerances()}};
  m["approximations"] = json::array({min_loss_label(config)});
  m["divergence_points"] = json::array();
  m["warnings"] = json::array();
  m["errors"] = json::array();

  const fs::path dir(out_dir);
  try {
    fs::create_directories(dir);
    switch (mode) {
      case Mode::Transmission: run_transmission(config, dir, res); break;
      case Mode::Transfer:
      case Mode::Nsr: run_spectrum(config, mode, dir, res); break;
      case Mode::Power: run_power(config, dir, res); break;
      case Mode::NoiseBudget: run_noise_budget(config, dir, res); break;
      case Mode::Validate: run_validate(config, dir, res); break;
      case Mode::FindBias: run_find_bias(config, dir, res); break;
    }
  } catch (const std::exception& e) {
    m["errors"].push_back(e.what());
    res.exit_code = exit_code_for(e);
  }
  m["outputs"] = res.outputs;
  m["status"] = res.exit_code == 0 ? "ok" : "error";
  m["exit_code"] = res.exit_code;
  write_metadata(out_dir, to_string(mode), m);
  return res;
}

}  // namespace ifo::runner
