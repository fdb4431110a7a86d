// Shared domain types, constants, and validation for the interferometer toolkit.
//
// Phases are radians everywhere inside the library. Degrees appear only at the
// configuration boundary (see scenario.hpp). Round-trip phases are carried as
// explicit tunings rather than recomputed from kilometre-scale lengths, so a
// picometre-scale bias survives in double precision.

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifo {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double c = 299792458.0;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

// Guard on every resonance denominator. Lossless perfect resonance is
// rejected rather than extrapolated.
inline constexpr double kSingularityEpsilon = 1e-12;

// ---------------------------------------------------------------------------
// Errors

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a cavity denominator vanishes (lossless perfect resonance).
class ResonanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Both arm phases at 0 mod 2pi, where the nonlinear phase is 0/0.
class DegeneratePointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// ---------------------------------------------------------------------------
// Phase helpers

/// Maps x onto (-pi, pi]. Throws ValidationError for non-finite input.
double normalize_phase(double x);

/// True when x is within tol of 0 mod 2pi.
bool is_zero_mod_2pi(double x, double tol = kSingularityEpsilon);

constexpr double deg_to_rad(double deg) { return deg * constants::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / constants::pi; }

/// Bias angles in the literature are quoted in degrees of round-trip phase.
constexpr double degrees_to_roundtrip_phase(double deg) { return deg_to_rad(deg); }

// ---------------------------------------------------------------------------
// Parameter records

class CarrierParams {
 public:
  CarrierParams(double wavelength, double power);

  static CarrierParams defaults() { return {1064e-9, 125.0}; }

  double wavelength() const { return wavelength_; }
  double power() const { return power_; }
  double omega() const { return constants::two_pi * constants::c / wavelength_; }
  double wavenumber() const { return constants::two_pi / wavelength_; }

  CarrierParams with_power(double power) const { return {wavelength_, power}; }

  /// One-way length whose round-trip phase equals `roundtrip_phase`.
  double roundtrip_phase_to_length(double roundtrip_phase) const {
    return roundtrip_phase / (2.0 * wavenumber());
  }

 private:
  double wavelength_;
  double power_;
};

/// Power budget of a partially transmitting surface: R + T + loss = 1.
class MirrorParams {
 public:
  /// Validates R + T + loss = 1 within 1e-12.
  static MirrorParams from_budget(double R, double T, double loss, double tuning = 0.0);
  /// Builds from amplitude reflectance r; the remainder of the budget is split
  /// as given by `loss`, with transmission taking what is left.
  static MirrorParams from_amplitude(double r, double loss = 0.0, double tuning = 0.0);
  static MirrorParams perfect(double tuning = 0.0) { return from_budget(1.0, 0.0, 0.0, tuning); }

  double R() const { return R_; }
  double T() const { return T_; }
  double loss() const { return loss_; }
  double tuning() const { return tuning_; }
  double r() const;
  double t() const;

  MirrorParams with_tuning(double tuning) const;
  /// Raises the loss to at least `min_loss`, taken out of R.
  MirrorParams with_min_loss(double min_loss) const;

 private:
  MirrorParams(double R, double T, double loss, double tuning)
      : R_(R), T_(T), loss_(loss), tuning_(tuning) {}

  double R_;
  double T_;
  double loss_;
  double tuning_;  // round-trip phase added on front-side reflection (rad)
};

struct GroverCoinParams {
  double r1 = 1.0;
  double phi1 = 0.0;
  double r2 = 1.0;
  double phi2 = 0.0;
  double theta = 0.0;  // one-way inter-splitter phase

  static GroverCoinParams ideal() { return {}; }
  void validate() const;
  bool is_pure_coin(double tol = 1e-15) const;
};

struct ArmState {
  double length_n = 4000.0;
  double length_e = 4000.0;
  double r_n = 1.0;
  double r_e = 1.0;
  double phi_n = 0.0;  // round-trip phases including bias tuning
  double phi_e = 0.0;
  double delta_off = 0.0;  // one-way DC offset length (m)

  void validate() const;
  double mean_length() const { return 0.5 * (length_n + length_e); }
  double common_phase() const { return phi_n + phi_e; }
  double differential_phase() const { return phi_n - phi_e; }

  /// Lossless symmetric arms biased at (phi_n, phi_e).
  static ArmState biased(double phi_n, double phi_e, double length = 4000.0);
};

class GwSignal {
 public:
  GwSignal(double h0, double omega, double phase = 0.0);
  static GwSignal at_frequency(double h0, double f_hz, double phase = 0.0);

  double h0() const { return h0_; }
  double omega() const { return omega_; }
  double phase() const { return phase_; }
  double wavenumber() const { return omega_ / constants::c; }

 private:
  double h0_;
  double omega_;
  double phase_;
};

enum class Spacing { Logarithmic, Linear };

class FrequencySweep {
 public:
  FrequencySweep(double f_min, double f_max, std::size_t points, Spacing spacing = Spacing::Logarithmic);

  double f_min() const { return f_min_; }
  double f_max() const { return f_max_; }
  std::size_t points() const { return points_; }
  Spacing spacing() const { return spacing_; }

  /// Strictly increasing grid; end points reproduced exactly.
  std::vector<double> grid() const;

 private:
  double f_min_;
  double f_max_;
  std::size_t points_;
  Spacing spacing_;
};

std::string to_string(Spacing s);
Spacing spacing_from_string(const std::string& s);

}  // namespace ifo
