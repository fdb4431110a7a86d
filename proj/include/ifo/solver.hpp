// Steady-state field solver for an OpticalNetwork.
//
// Unknowns are the complex amplitudes (sqrt(W)) leaving every port. Each port
// contributes one linear equation
//     out_p - sum_q S_pq(Omega) * out_peer(q) = source_p
// which is solved densely. The carrier uses Omega = 0; a sideband at
// w0 + Omega reuses the same assembly with the frequency offset.

#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ifo/core.hpp"
#include "ifo/network.hpp"

namespace ifo::net {

inline constexpr double kResidualTolerance = 1e-12;
inline constexpr double kConditionWarning = 1e14;
inline constexpr double kConditionSingular = 1e15;

struct SolveReport {
  double condition_estimate = 1.0;
  double residual = 0.0;  // normwise relative residual after refinement
  std::vector<std::string> warnings;
};

class FieldState {
 public:
  FieldState(const OpticalNetwork& net, std::vector<cplx> outgoing, double offset_omega, SolveReport report);

  const OpticalNetwork& network() const { return *net_; }
  double offset_omega() const { return offset_omega_; }
  const SolveReport& report() const { return report_; }

  const std::vector<cplx>& outgoing() const { return out_; }
  cplx outgoing(std::size_t index) const { return out_.at(index); }
  cplx outgoing(const std::string& dotted) const { return outgoing(net_->port_index(dotted)); }

  /// Field arriving at a port from its peer; zero for open ports.
  cplx incoming(std::size_t index) const;
  cplx incoming(const std::string& dotted) const { return incoming(net_->port_index(dotted)); }

  double incident_power(const std::string& dotted) const { return std::norm(incoming(dotted)); }

  /// Total power leaving the network: open ports, absorbed at detectors and
  /// returned into lasers.
  double exiting_power() const;

  /// Mirror and splitter absorption implied by the solved fields.
  double absorbed_power() const;

 private:
  const OpticalNetwork* net_;
  std::vector<cplx> out_;
  double offset_omega_;
  SolveReport report_;
};

/// Throws ResonanceError when the system is singular and SolverError when the
/// residual cannot be brought below kResidualTolerance.
FieldState solve_carrier(const OpticalNetwork& net, const CarrierParams& carrier);
/// The state refers back to its network, so a temporary network is rejected.
FieldState solve_carrier(OpticalNetwork&& net, const CarrierParams& carrier) = delete;

struct GwInjection {
  double h0 = 1.0;
  double phase = 0.0;
};
struct FrequencyNoiseInjection {
  double asd = 1.0;  // Hz/sqrt(Hz)
};
struct IntensityNoiseInjection {
  double asd = 1.0;  // W/sqrt(Hz)
};
using InjectionSpec = std::variant<GwInjection, FrequencyNoiseInjection, IntensityNoiseInjection>;

struct SidebandState {
  double frequency;
  FieldState upper;
  FieldState lower;
};

SidebandState solve_sidebands(const OpticalNetwork& net, const FieldState& carrier_state,
                              const CarrierParams& carrier, double f, const InjectionSpec& injection);

struct DetectorReading {
  double dc_power;  // W
  cplx signal;      // W per unit injection
};

/// DC power at the readout and the demodulated beat conj(E_c) E_u + E_c conj(E_l).
DetectorReading read_detector(const FieldState& carrier_state, const SidebandState* sidebands = nullptr);

/// sqrt(2 hbar w0 P_DC).
double shot_noise_asd(double dc_power, const CarrierParams& carrier);

/// Incident power at every named probe.
std::map<std::string, double> power_budget(const FieldState& carrier_state);

/// Incident power at one probe. Throws LookupError for unknown labels.
double probe_power(const FieldState& carrier_state, const std::string& label);

}  // namespace ifo::net
