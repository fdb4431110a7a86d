// Closed-form Grover-Michelson interferometer (GMI) relations.
//
// These are the reference forms the network solver is checked against, and a
// fast standalone calculator. Field amplitudes are relative to the incident
// carrier amplitude E0.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ifo/core.hpp"

namespace ifo::analytic {

struct CavityFields {
  cplx north;    // E_N / E0
  cplx east;     // E_E / E0
  cplx average;  // (E_N - E_E) / 2
};

struct OutputFields {
  cplx transmitted;  // bottom port of the first splitter
  cplx reflected;    // back toward the source
  /// Argument of the bracketed cavity term. For the pure coin with unit end
  /// mirrors this is the nonlinear phase gamma and E_t = e^{j gamma/2} cos(gamma/2).
  double gamma;
};

struct FringeSolution {
  double phi_n = 0.0;
  std::vector<double> maxima;          // phi_E of genuine transmission maxima, in (-pi, pi]
  std::vector<double> spurious_zeros;  // phi_E of spurious zero crossings of gamma
  bool degenerate_line = false;        // phi_N = 0 mod 2pi: every listed point is spurious
};

/// Cavity amplitudes for general coin and arm parameters.
/// Throws ResonanceError when the shared denominator is below kSingularityEpsilon.
CavityFields cavity_fields(const GroverCoinParams& coin, const ArmState& arms);

OutputFields output_fields_general(const GroverCoinParams& coin, const ArmState& arms);

/// Pure coin, unit end mirrors.
OutputFields output_fields_ideal(double phi_n, double phi_e);

/// Nonlinear phase gamma(phi_N, phi_E) in (-pi, pi].
/// Throws DegeneratePointError when both phases are 0 mod 2pi.
double gamma_phase(double phi_n, double phi_e);

/// cos^2(gamma / 2), the ideal transmitted fraction.
double ideal_transmission(double phi_n, double phi_e);

FringeSolution transmission_extrema(double phi_n);

/// Broadband power gain at the bias phi_N = -phi_E = +-theta_b for end-mirror
/// power reflectance R (unit M2, phi_2 = 0).
double power_gain(double theta_b, double R);

/// Inverse of power_gain at R = 1.
double bias_for_gain(double gain);

/// 2 |E_c|^2 from the cavity fields. Agrees with power_gain on the
/// phi_N = -phi_E family at R = 1; off that family it is a derived quantity,
/// not a closed form from the literature.
struct FieldGain {
  double value;
  bool on_bias_family;
};
FieldGain field_gain(const GroverCoinParams& coin, const ArmState& arms);

/// Envelope amplitude of the GW-induced one-way phase modulation over a path of length L:
/// (h0 w0 / w_gw) sin(w_gw L / 2c).
double gw_phase_modulation(const GwSignal& gw, const CarrierParams& carrier, double length);

/// Full time-dependent modulation delta_phi(t) including the retardation term.
double gw_phase_modulation_at(const GwSignal& gw, const CarrierParams& carrier, double length, double t);

/// Transfer from strain to detector power (W per unit strain):
/// P0 |E_c| (w0 / w_gw) sin(k0 delta_off) sin(w_gw Lbar / c).
double gm_transfer_function(const CarrierParams& carrier, const ArmState& arms, double ec_mag, double f_gw);

/// Plain Michelson baseline: gm_transfer_function with |E_c| = 1.
double mi_transfer_function(const CarrierParams& carrier, const ArmState& arms, double f_gw);

/// Strain-referred NSR, or the divergence marker at transfer-function zeros.
struct Nsr {
  double value;  // strain / sqrt(Hz); +inf when diverged
  bool diverged;
};

/// Shot-noise limited NSR: sqrt(2 hbar / (w0 P0 G)) w_gw / sin(w_gw Lbar / c).
Nsr gm_nsr(const CarrierParams& carrier, double gain, double mean_length, double f_gw);
inline Nsr mi_nsr(const CarrierParams& carrier, double mean_length, double f_gw) {
  return gm_nsr(carrier, 1.0, mean_length, f_gw);
}

/// Transfer at the GMI bright fringe, where the full transmitted carrier beats
/// with the signal sidebands: P0 |E_c| (w0 / w_gw) sin(w_gw Lbar / c).
/// Derived from the sideband network model, not a closed form from the literature.
double bright_fringe_transfer(const CarrierParams& carrier, double ec_mag, double mean_length, double f_gw);
Nsr bright_fringe_nsr(const CarrierParams& carrier, double ec_mag, double mean_length, double f_gw);

/// First frequency at which sin(w_gw Lbar / c) vanishes: c / (2 Lbar).
double first_notch_frequency(double mean_length);

enum class CoinPort { a = 0, b = 1, c = 2, d = 3 };

CoinPort coin_port_from_char(char label);

/// Row of the Grover matrix for a photon entering `port`.
std::array<double, 4> grover_scatter(CoinPort port);
std::array<double, 4> grover_scatter(char label);

using Matrix4 = std::array<std::array<double, 4>, 4>;
Matrix4 grover_matrix();

}  // namespace ifo::analytic
