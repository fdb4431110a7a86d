#include "ifo/core.hpp"

#include <cmath>
#include <sstream>

namespace ifo {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw ValidationError(std::string(what) + " must be finite");
  }
}

void require_unit_interval(double x, const char* what) {
  require_finite(x, what);
  if (x < 0.0 || x > 1.0) {
    std::ostringstream os;
    os << what << " = " << x << " outside [0, 1]";
    throw ValidationError(os.str());
  }
}

}  // namespace

double normalize_phase(double x) {
  require_finite(x, "phase");
  double y = std::remainder(x, constants::two_pi);  // [-pi, pi]
  if (y <= -constants::pi) y += constants::two_pi;
  return y;
}

bool is_zero_mod_2pi(double x, double tol) { return std::abs(normalize_phase(x)) <= tol; }

// ---------------------------------------------------------------------------

CarrierParams::CarrierParams(double wavelength, double power) : wavelength_(wavelength), power_(power) {
  require_finite(wavelength, "wavelength");
  require_finite(power, "power");
  if (wavelength <= 0.0) throw ValidationError("wavelength must be positive");
  if (power < 0.0) throw ValidationError("input power must be non-negative");
}

// ---------------------------------------------------------------------------

MirrorParams MirrorParams::from_budget(double R, double T, double loss, double tuning) {
  require_unit_interval(R, "R");
  require_unit_interval(T, "T");
  require_unit_interval(loss, "loss");
  require_finite(tuning, "tuning");
  const double residual = R + T + loss - 1.0;
  if (std::abs(residual) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "power budget violated: R + T + loss - 1 = " << residual;
    throw ValidationError(os.str());
  }
  return {R, T, loss, tuning};
}

MirrorParams MirrorParams::from_amplitude(double r, double loss, double tuning) {
  require_unit_interval(r, "r");
  require_unit_interval(loss, "loss");
  const double R = r * r;
  double T = 1.0 - R - loss;
  if (T < -1e-12) throw ValidationError("r^2 + loss exceeds 1");
  if (T < 0.0) T = 0.0;
  return {R, T, loss, tuning};
}

double MirrorParams::r() const { return std::sqrt(R_); }
double MirrorParams::t() const { return std::sqrt(T_); }

MirrorParams MirrorParams::with_tuning(double tuning) const {
  require_finite(tuning, "tuning");
  return {R_, T_, loss_, tuning};
}

MirrorParams MirrorParams::with_min_loss(double min_loss) const {
  if (loss_ >= min_loss) return *this;
  const double extra = min_loss - loss_;
  if (R_ >= extra) return {R_ - extra, T_, min_loss, tuning_};
  return {R_, T_ - extra, min_loss, tuning_};
}

// ---------------------------------------------------------------------------

void GroverCoinParams::validate() const {
  require_unit_interval(r1, "r1");
  require_unit_interval(r2, "r2");
  require_finite(phi1, "phi1");
  require_finite(phi2, "phi2");
  require_finite(theta, "theta");
}

bool GroverCoinParams::is_pure_coin(double tol) const {
  return std::abs(r1 - 1.0) <= tol && std::abs(r2 - 1.0) <= tol && is_zero_mod_2pi(phi1, tol) &&
         is_zero_mod_2pi(phi2, tol) && is_zero_mod_2pi(theta, tol);
}

void ArmState::validate() const {
  require_finite(length_n, "L_N");
  require_finite(length_e, "L_E");
  if (length_n <= 0.0 || length_e <= 0.0) throw ValidationError("arm lengths must be positive");
  require_unit_interval(r_n, "r_N");
  require_unit_interval(r_e, "r_E");
  require_finite(phi_n, "phi_N");
  require_finite(phi_e, "phi_E");
  require_finite(delta_off, "delta_off");
}

ArmState ArmState::biased(double phi_n, double phi_e, double length) {
  ArmState a;
  a.length_n = length;
  a.length_e = length;
  a.phi_n = phi_n;
  a.phi_e = phi_e;
  a.validate();
  return a;
}

// ---------------------------------------------------------------------------

GwSignal::GwSignal(double h0, double omega, double phase) : h0_(h0), omega_(omega), phase_(phase) {
  require_finite(h0, "h0");
  require_finite(omega, "omega_gw");
  require_finite(phase, "phi_gw");
  if (h0 < 0.0) throw ValidationError("strain amplitude must be non-negative");
  if (omega <= 0.0) throw ValidationError("GW angular frequency must be positive");
}

GwSignal GwSignal::at_frequency(double h0, double f_hz, double phase) {
  return {h0, constants::two_pi * f_hz, phase};
}

// ---------------------------------------------------------------------------

FrequencySweep::FrequencySweep(double f_min, double f_max, std::size_t points, Spacing spacing)
    : f_min_(f_min), f_max_(f_max), points_(points), spacing_(spacing) {
  require_finite(f_min, "f_min");
  require_finite(f_max, "f_max");
  if (!(f_min > 0.0 && f_min < f_max)) throw ValidationError("sweep requires 0 < f_min < f_max");
  if (points < 2) throw ValidationError("sweep requires at least 2 points");
}

std::vector<double> FrequencySweep::grid() const {
  std::vector<double> out(points_);
  const double n = static_cast<double>(points_ - 1);
  for (std::size_t i = 0; i < points_; ++i) {
    const double u = static_cast<double>(i) / n;
    if (spacing_ == Spacing::Logarithmic) {
      out[i] = std::exp(std::log(f_min_) + u * (std::log(f_max_) - std::log(f_min_)));
    } else {
      out[i] = f_min_ + u * (f_max_ - f_min_);
    }
  }
  out.front() = f_min_;
  out.back() = f_max_;
  return out;
}

std::string to_string(Spacing s) { return s == Spacing::Logarithmic ? "log" : "linear"; }

Spacing spacing_from_string(const std::string& s) {
  if (s == "log" || s == "logarithmic") return Spacing::Logarithmic;
  if (s == "linear" || s == "lin") return Spacing::Linear;
  throw ValidationError("unknown sweep spacing '" + s + "'");
}

}  // namespace ifo
