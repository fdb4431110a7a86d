// Sweep orchestration behind the `ifo` command.
//
// Every mode writes one or more CSV files plus `<mode>.json` metadata into the
// output directory. Outputs depend only on the resolved configuration, so two
// runs of the same scenario are byte-identical.

#pragma once

#include <string>
#include <vector>

#include "ifo/scenario.hpp"

namespace ifo::runner {

using scenario::json;
using scenario::ScenarioConfig;

enum class Mode { Transmission, Transfer, Nsr, Power, NoiseBudget, Validate, FindBias };

const std::vector<std::string>& mode_names();
Mode mode_from_string(const std::string& name);
std::string to_string(Mode mode);

/// Exit status for an exception escaping a run: 2 for configuration and
/// structure problems, 3 for solver and resonance failures.
int exit_code_for(const std::exception& e);

struct TransmissionRow {
  double phi_e_deg;
  double transmission;  // NaN where the solve was rejected
};

/// Readout power over input power while phi_E sweeps the open interval
/// (0, 360) degrees on cell centres.
std::vector<TransmissionRow> transmission_curve(const ScenarioConfig& config, double phi_n_deg,
                                                std::vector<std::string>* notes = nullptr);

struct BiasReport {
  std::string target;         // "gain" or "nsr"
  double requested = 0.0;     // G, or NSR in strain/sqrt(Hz)
  double frequency_hz = 0.0;  // where the NSR is evaluated
  double theta_b_rad = 0.0;
  double theta_b_deg = 0.0;
  double gain_analytic = 0.0;  // G at theta_b from the closed form
  double nsr_analytic = 0.0;   // shot-noise NSR law at that gain
  double nsr_network = 0.0;    // network NSR at (theta_b, -theta_b) plus the configured offset
  double disagreement = 0.0;   // |nsr_network / nsr_analytic - 1|
};

/// Throws ValidationError when the target cannot be reached on the bias range.
BiasReport find_bias(const ScenarioConfig& config);

/// Network NSR of a Grover-family config re-biased to (theta, -theta).
double network_nsr_at_bias(const ScenarioConfig& config, double theta_rad, double f_hz);

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> outputs;  // file names relative to the output directory
  json metadata;
};

/// Runs one mode. Failures are recorded in the metadata (which is still
/// written) and reflected in the exit code rather than thrown.
RunResult run_sweep(const ScenarioConfig& config, Mode mode, const std::string& out_dir);

/// Metadata skeleton for runs that fail before a configuration exists.
json error_metadata(const std::string& mode, const std::string& message, int exit_code);

/// Writes `metadata` as `<mode>.json` in `out_dir`.
void write_metadata(const std::string& out_dir, const std::string& mode, const json& metadata);

/// CSV number format: shortest round-trip-safe text, `inf` and `nan` literal.
std::string format_number(double x);

}  // namespace ifo::runner
