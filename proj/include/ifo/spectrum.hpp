// Frequency sweeps over a solved network: GW transfer, shot-noise NSR,
// laser-noise couplings and the cross-check against the closed forms.

#pragma once

#include <string>
#include <vector>

#include "ifo/core.hpp"
#include "ifo/network.hpp"
#include "ifo/solver.hpp"

namespace ifo::net {

struct SpectrumRecord {
  double frequency_hz = 0.0;
  double tf_mag = 0.0;    // W per unit strain
  double tf_phase = 0.0;  // rad
  double shot_asd = 0.0;  // W/sqrt(Hz)
  double nsr = 0.0;       // strain/sqrt(Hz); +inf when diverged
  bool diverged = false;
};

/// Rows where |sin(w_gw Lbar / c)| falls below this are flagged as diverged.
inline constexpr double kNotchSine = 1e-9;

/// Worker count for sweeps: hardware concurrency, capped by IFO_THREADS.
std::size_t worker_count(std::size_t jobs);

/// Mean length of the GW-coupled arm spaces (0 when there are none).
double gw_arm_length(const OpticalNetwork& net);

/// Rows carry transfer and shot ASD; NSR is filled in as well, so the two
/// calls differ only in intent.
std::vector<SpectrumRecord> gw_transfer_spectrum(const OpticalNetwork& net, const CarrierParams& carrier,
                                                 const FrequencySweep& sweep);
std::vector<SpectrumRecord> nsr_spectrum(const OpticalNetwork& net, const CarrierParams& carrier,
                                         const FrequencySweep& sweep);

/// Same as above on an explicit, strictly increasing frequency list.
std::vector<SpectrumRecord> spectrum_at(const OpticalNetwork& net, const CarrierParams& carrier,
                                        const std::vector<double>& freqs);

enum class LaserNoiseKind { Frequency, Intensity };
std::string to_string(LaserNoiseKind kind);

/// Detector signal per unit source ASD (W per Hz/sqrt(Hz), or W per W/sqrt(Hz)).
cplx laser_noise_tf(const FieldState& carrier_state, const CarrierParams& carrier, double f, LaserNoiseKind kind);
std::vector<cplx> laser_noise_spectrum(const OpticalNetwork& net, const CarrierParams& carrier,
                                       const std::vector<double>& freqs, LaserNoiseKind kind);

struct ValidationOptions {
  std::size_t grid = 50;            // bias grid is grid x grid
  double bias = deg_to_rad(0.06);   // GMI bias for the spectral checks
  double mi_offset = deg_to_rad(0.01);  // MI round-trip differential offset
  double length = 4000.0;
  CarrierParams carrier = CarrierParams::defaults();
  FrequencySweep sweep{1.0, 1e4, 60};
  bool corrupt_splitter = false;
};

struct ValidationReport {
  std::size_t grid_points = 0;
  double transmission_dev = 0.0;  // max absolute
  double mi_transfer_dev = 0.0;   // max relative
  double mi_nsr_dev = 0.0;
  double gmi_transfer_dev = 0.0;
  double gmi_nsr_dev = 0.0;
  bool passed = false;
  std::vector<std::string> failures;
};

inline constexpr double kTransmissionTolerance = 1e-6;
inline constexpr double kSpectralTolerance = 0.01;

/// Network against closed forms on the lossless GMI and MI presets.
/// Transmission is compared with cos^2(gamma/2); the MI spectra with the
/// transfer and NSR laws at |E_c| = 1; the GMI spectra with the bright-fringe
/// forms, which are what the network realises at phi_E = -phi_N.
ValidationReport validate_against_analytic(const ValidationOptions& options = {});

}  // namespace ifo::net
