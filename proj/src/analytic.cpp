#include "ifo/analytic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ifo::analytic {

namespace {

using constants::c;
using constants::hbar;

cplx phasor(double r, double phi) { return std::polar(r, phi); }

void require_positive_frequency(double f) {
  if (!(std::isfinite(f) && f > 0.0)) throw ValidationError("frequency must be positive and finite");
}

std::string describe_bias(const ArmState& arms) {
  std::ostringstream os;
  os.precision(6);
  os << "(phi_N, phi_E) = (" << rad_to_deg(arms.phi_n) << " deg, " << rad_to_deg(arms.phi_e) << " deg)";
  return os.str();
}

// 1 - r e^{j phi} without cancellation near r = 1, phi = 0:
// (1 - r) + r (2 sin^2(phi / 2) - j sin phi).
cplx one_minus(double r, double phi) {
  const double s = std::sin(0.5 * phi);
  return (1.0 - r) + r * cplx(2.0 * s * s, -std::sin(phi));
}

// 2 - r2 e^{j phi2} (rN e^{j phiN} + rE e^{j phiE}), split into two such terms.
cplx cavity_denominator(const GroverCoinParams& coin, const ArmState& arms) {
  return one_minus(coin.r2 * arms.r_n, coin.phi2 + arms.phi_n) + one_minus(coin.r2 * arms.r_e, coin.phi2 + arms.phi_e);
}

}  // namespace

CavityFields cavity_fields(const GroverCoinParams& coin, const ArmState& arms) {
  coin.validate();
  arms.validate();
  const cplx den = cavity_denominator(coin, arms);
  if (std::abs(den) <= kSingularityEpsilon) {
    throw ResonanceError("cavity denominator vanishes at " + describe_bias(arms) +
                         ": lossless perfect resonance");
  }
  const cplx entry = std::polar(1.0, coin.theta);
  const cplx north = entry * one_minus(coin.r2 * arms.r_e, arms.phi_e + coin.phi2) / den;
  const cplx east = entry * one_minus(coin.r2 * arms.r_n, arms.phi_n + coin.phi2) / den;
  return {north, east, 0.5 * (north - east)};
}

OutputFields output_fields_general(const GroverCoinParams& coin, const ArmState& arms) {
  coin.validate();
  arms.validate();
  const cplx den = cavity_denominator(coin, arms);
  if (std::abs(den) <= kSingularityEpsilon) {
    throw ResonanceError("output fields undefined at " + describe_bias(arms) + ": lossless perfect resonance");
  }
  const cplx arm_n = phasor(arms.r_n, arms.phi_n);
  const cplx arm_e = phasor(arms.r_e, arms.phi_e);
  const cplx numerator =
      arm_n + arm_e - 2.0 * coin.r2 * arms.r_n * arms.r_e * std::polar(1.0, coin.phi2 + arms.phi_n + arms.phi_e);
  const cplx bracket = numerator / (-den);
  const cplx cavity_term = 0.5 * std::polar(1.0, 2.0 * coin.theta) * bracket;
  const cplx m1_term = 0.5 * phasor(coin.r1, coin.phi1);
  double gamma = std::arg(bracket);
  if (gamma <= -constants::pi) gamma = constants::pi;
  return {cavity_term + m1_term, cavity_term - m1_term, gamma};
}

OutputFields output_fields_ideal(double phi_n, double phi_e) {
  const cplx en = std::polar(1.0, phi_n);
  const cplx ee = std::polar(1.0, phi_e);
  const cplx den = en + ee - 2.0;
  if (std::abs(den) <= kSingularityEpsilon) {
    throw ResonanceError("ideal output fields undefined: both arm phases are 0 mod 2pi");
  }
  const cplx ratio = (en + ee - 2.0 * en * ee) / den;
  double gamma = std::arg(ratio);
  if (gamma <= -constants::pi) gamma = constants::pi;
  return {0.5 * (ratio + 1.0), 0.5 * (ratio - 1.0), gamma};
}

double gamma_phase(double phi_n, double phi_e) {
  if (is_zero_mod_2pi(phi_n) && is_zero_mod_2pi(phi_e)) {
    throw DegeneratePointError("gamma is 0/0 when both arm phases are 0 mod 2pi");
  }
  const double common = phi_n + phi_e;
  const double diff = phi_n - phi_e;
  const double y = std::sin(common) - std::sin(phi_n) - std::sin(phi_e);
  const double x = std::cos(common) - std::cos(phi_n) - std::cos(phi_e) + 0.5 * (1.0 + std::cos(diff));
  double g = std::atan2(y, x);
  if (g <= -constants::pi) g = constants::pi;
  return g;
}

double ideal_transmission(double phi_n, double phi_e) {
  const double half = 0.5 * gamma_phase(phi_n, phi_e);
  const double ch = std::cos(half);
  return ch * ch;
}

FringeSolution transmission_extrema(double phi_n) {
  FringeSolution sol;
  sol.phi_n = normalize_phase(phi_n);
  sol.maxima.push_back(normalize_phase(-phi_n));
  sol.spurious_zeros.push_back(0.0);
  sol.degenerate_line = is_zero_mod_2pi(phi_n);
  return sol;
}

double power_gain(double theta_b, double R) {
  if (!std::isfinite(theta_b)) throw ValidationError("bias phase must be finite");
  if (!(R >= 0.0 && R <= 1.0)) throw ValidationError("power reflectance must lie in [0, 1]");
  // 2 + 2R cos^2 - 4R cos, regrouped so small biases do not cancel:
  // 2 (1 - R cos)^2 + 2 R (1 - R) cos^2 with 1 - R cos = (1 - R) + 2R sin^2(theta/2).
  // cos taken as sin(pi/2 - theta) near pi/2, where the subtraction is exact
  // and the value at pi/2 is exactly zero.
  const double half_pi = 0.5 * constants::pi;
  const double cs = std::abs(theta_b - half_pi) < 0.25 * constants::pi ? std::sin(half_pi - theta_b) : std::cos(theta_b);
  const double s_half = std::sin(0.5 * theta_b);
  const double one_minus_rc = cs < 0.5 ? 1.0 - R * cs : (1.0 - R) + 2.0 * R * s_half * s_half;
  const double den = 2.0 * one_minus_rc * one_minus_rc + 2.0 * R * (1.0 - R) * cs * cs;
  if (!(den > 0.0) || (R == 1.0 && is_zero_mod_2pi(theta_b))) {
    throw ResonanceError("power gain diverges: lossless bias at 0 mod 2pi");
  }
  const double sn = std::sin(theta_b);
  return R * sn * sn / den;
}

double bias_for_gain(double gain) {
  if (!(std::isfinite(gain) && gain > 0.0)) throw ValidationError("target gain must be positive and finite");
  // cos(theta) = (2G - 1) / (2G + 1)  <=>  tan^2(theta / 2) = 1 / (2G)
  return 2.0 * std::atan(1.0 / std::sqrt(2.0 * gain));
}

FieldGain field_gain(const GroverCoinParams& coin, const ArmState& arms) {
  const CavityFields f = cavity_fields(coin, arms);
  const bool family = is_zero_mod_2pi(arms.phi_n + arms.phi_e, 1e-12) && coin.r2 == 1.0 &&
                      is_zero_mod_2pi(coin.phi2) && arms.r_n == arms.r_e;
  return {2.0 * std::norm(f.average), family};
}

double gw_phase_modulation(const GwSignal& gw, const CarrierParams& carrier, double length) {
  if (!(length > 0.0)) throw ValidationError("path length must be positive");
  return gw.h0() * carrier.omega() / gw.omega() * std::sin(gw.omega() * length / (2.0 * c));
}

double gw_phase_modulation_at(const GwSignal& gw, const CarrierParams& carrier, double length, double t) {
  const double envelope = gw_phase_modulation(gw, carrier, length);
  return envelope * std::cos(gw.omega() * t + gw.phase() - gw.omega() * length / c);
}

double gm_transfer_function(const CarrierParams& carrier, const ArmState& arms, double ec_mag, double f_gw) {
  require_positive_frequency(f_gw);
  const double w = constants::two_pi * f_gw;
  return carrier.power() * ec_mag * (carrier.omega() / w) * std::sin(carrier.wavenumber() * arms.delta_off) *
         std::sin(w * arms.mean_length() / c);
}

double mi_transfer_function(const CarrierParams& carrier, const ArmState& arms, double f_gw) {
  return gm_transfer_function(carrier, arms, 1.0, f_gw);
}

Nsr gm_nsr(const CarrierParams& carrier, double gain, double mean_length, double f_gw) {
  require_positive_frequency(f_gw);
  if (!(gain > 0.0)) throw ValidationError("gain must be positive");
  if (!(mean_length > 0.0)) throw ValidationError("arm length must be positive");
  if (!(carrier.power() > 0.0)) throw ValidationError("NSR needs a positive input power");
  const double w = constants::two_pi * f_gw;
  const double s = std::sin(w * mean_length / c);
  if (std::abs(s) < 1e-12) return {std::numeric_limits<double>::infinity(), true};
  return {std::sqrt(2.0 * hbar / (carrier.omega() * carrier.power() * gain)) * w / std::abs(s), false};
}

double bright_fringe_transfer(const CarrierParams& carrier, double ec_mag, double mean_length, double f_gw) {
  require_positive_frequency(f_gw);
  const double w = constants::two_pi * f_gw;
  return carrier.power() * ec_mag * (carrier.omega() / w) * std::sin(w * mean_length / c);
}

Nsr bright_fringe_nsr(const CarrierParams& carrier, double ec_mag, double mean_length, double f_gw) {
  return gm_nsr(carrier, ec_mag * ec_mag, mean_length, f_gw);
}

double first_notch_frequency(double mean_length) {
  if (!(mean_length > 0.0)) throw ValidationError("arm length must be positive");
  return c / (2.0 * mean_length);
}

CoinPort coin_port_from_char(char label) {
  switch (label) {
    case 'a': case 'A': return CoinPort::a;
    case 'b': case 'B': return CoinPort::b;
    case 'c': case 'C': return CoinPort::c;
    case 'd': case 'D': return CoinPort::d;
    default: break;
  }
  throw ValidationError(std::string("invalid coin port '") + label + "', expected one of a, b, c, d");
}

std::array<double, 4> grover_scatter(CoinPort port) {
  std::array<double, 4> row{0.5, 0.5, 0.5, 0.5};
  row[static_cast<std::size_t>(port)] = -0.5;
  return row;
}

std::array<double, 4> grover_scatter(char label) { return grover_scatter(coin_port_from_char(label)); }

Matrix4 grover_matrix() {
  Matrix4 m{};
  for (std::size_t i = 0; i < 4; ++i) m[i] = grover_scatter(static_cast<CoinPort>(i));
  return m;
}

}  // namespace ifo::analytic
