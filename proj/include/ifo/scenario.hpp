// Scenario configuration: JSON files layered over preset defaults, with
// `--set key=value` overrides on top.
//
// Angles in the file are degrees of round-trip phase. The east bias actually
// applied is phi_e - offset, so (phi_n, phi_e, offset) = (0.02, -0.02, 0.0001)
// and (0.02, -0.0201, 0) describe the same operating point. The offset fed to
// the transfer-function law is the one-way length
//     delta_off = departure_deg * (pi / 180) / (2 k0)
// where the departure is measured from the bright fringe (phi_N + phi_E = 0)
// for Grover-Michelson presets and from the dark fringe (phi_N = phi_E)
// otherwise.

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ifo/core.hpp"
#include "ifo/network.hpp"
#include "ifo/presets.hpp"

namespace ifo::scenario {

using json = nlohmann::ordered_json;

enum class Provenance { Default, File, Override };
std::string to_string(Provenance p);

struct ScenarioConfig {
  std::string preset = "gmi";
  std::string source_path;

  double wavelength_m = 1064e-9;
  double power_w = 125.0;

  double phi_n_deg = 0.06;
  double phi_e_deg = -0.06;
  double offset_deg = 0.0;
  double phi1_deg = 0.0;
  double phi2_deg = 0.0;
  double theta_deg = 0.0;

  double length_n_m = 4000.0;
  double length_e_m = 4000.0;

  double mirror_loss = 0.0;
  double splitter_loss = 0.0;
  double end_T = 0.0;
  double coin_T = 0.0;
  double min_loss = 0.0;

  double prm_T = 0.0;
  double srm_T = 0.0;
  double itm_T = 0.0;
  double prm_tuning_deg = 0.0;
  double srm_tuning_deg = 0.0;

  double f_min_hz = 1.0;
  double f_max_hz = 1e4;
  std::size_t points = 200;
  Spacing spacing = Spacing::Logarithmic;

  std::vector<double> transmission_phi_n_deg{12.0, 32.0, 52.0};
  std::size_t transmission_points = 3600;

  std::string frequency_asd;  // path, empty for none
  std::string intensity_asd;
  double ctn_length_m = 4000.0;
  bool include_ctn = true;

  std::string find_bias_target = "gain";  // gain | nsr
  double find_bias_value = 0.5;
  double find_bias_frequency_hz = 100.0;
  double find_bias_min_deg = 0.001;

  std::size_t validate_grid = 50;
  bool validate_corrupt_splitter = false;  // negative control for `validate`

  json network;   // explicit component list when preset == "custom"
  json resolved;  // merged document the fields above were read from

  std::map<std::string, Provenance> provenance;  // every leaf key

  CarrierParams carrier() const { return {wavelength_m, power_w}; }
  double phi_n() const { return deg_to_rad(phi_n_deg); }
  double phi_e() const { return deg_to_rad(phi_e_deg - offset_deg); }
  bool grover_family() const;
  /// Departure from the preset's reference fringe, degrees of round-trip phase.
  double departure_deg() const;
  /// One-way offset length for the transfer-function law.
  double delta_off_m() const { return carrier().roundtrip_phase_to_length(deg_to_rad(departure_deg())); }
  ArmState arms() const;
  FrequencySweep sweep() const { return {f_min_hz, f_max_hz, points, spacing}; }
  net::PresetOptions preset_options() const;

  /// Resolved configuration with a parallel provenance tree.
  json to_json() const;
};

/// Default document for a preset (every accepted key appears here).
json default_document(const std::string& preset);

/// Parses `path` (may be empty for "no file"). `preset_override` wins over the
/// file's preset; `sets` are dotted key=value overrides applied last.
/// Throws ValidationError on syntax errors (with line number), unknown keys
/// and unit or range violations.
ScenarioConfig parse_scenario(const std::string& path, const std::string& preset_override = "",
                              const std::vector<std::string>& sets = {});

/// Same, from an in-memory document.
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& preset_override = "",
                                   const std::vector<std::string>& sets = {}, const std::string& origin = "<text>");

/// Builds and finalizes the network the config describes.
net::OpticalNetwork build_network(const ScenarioConfig& config);

}  // namespace ifo::scenario
