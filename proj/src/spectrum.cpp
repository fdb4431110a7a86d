#include "ifo/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "ifo/analytic.hpp"
#include "ifo/presets.hpp"

namespace ifo::net {

namespace {

std::string at_frequency(const std::string& what, double f) {
  std::ostringstream os;
  os.precision(10);
  os << what << " (at f = " << f << " Hz)";
  return os.str();
}

// Runs body(i) for i in [0, n) over a small thread pool. Each index writes
// only its own slot, so results are independent of scheduling. The first
// failure by index is rethrown with the frequency attached.
template <class Body>
void parallel_for(std::size_t n, const std::vector<double>& freqs, Body body) {
  const std::size_t workers = worker_count(n);
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < n; i += workers) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ResonanceError& e) {
      throw ResonanceError(at_frequency(e.what(), freqs[i]));
    } catch (const SolverError& e) {
      throw SolverError(at_frequency(e.what(), freqs[i]));
    } catch (const ValidationError& e) {
      throw ValidationError(at_frequency(e.what(), freqs[i]));
    }
  }
}

double relative_dev(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

}  // namespace

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("IFO_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

double gw_arm_length(const OpticalNetwork& net) {
  double sum = 0.0;
  int count = 0;
  for (const auto& c : net.components()) {
    if (const auto* s = std::get_if<Space>(&c.spec); s && s->gw_sign != 0) {
      sum += s->length;
      ++count;
    }
  }
  return count ? sum / count : 0.0;
}

std::vector<SpectrumRecord> spectrum_at(const OpticalNetwork& net, const CarrierParams& carrier,
                                        const std::vector<double>& freqs) {
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!(std::isfinite(freqs[i]) && freqs[i] > 0.0) || (i > 0 && !(freqs[i] > freqs[i - 1]))) {
      throw ValidationError("spectrum frequencies must be positive and strictly increasing");
    }
  }
  const FieldState cs = solve_carrier(net, carrier);
  const double dc = read_detector(cs).dc_power;
  const double shot = shot_noise_asd(dc, carrier);
  const double arm = gw_arm_length(net);

  std::vector<SpectrumRecord> rows(freqs.size());
  parallel_for(freqs.size(), freqs, [&](std::size_t i) {
    const double f = freqs[i];
    const SidebandState sb = solve_sidebands(net, cs, carrier, f, GwInjection{});
    const cplx tf = read_detector(cs, &sb).signal;
    SpectrumRecord& r = rows[i];
    r.frequency_hz = f;
    r.tf_mag = std::abs(tf);
    r.tf_phase = std::arg(tf);
    r.shot_asd = shot;
    const bool notch = arm > 0.0 && std::abs(std::sin(constants::two_pi * f * arm / constants::c)) < kNotchSine;
    r.diverged = notch || r.tf_mag == 0.0;
    r.nsr = r.diverged ? std::numeric_limits<double>::infinity() : shot / r.tf_mag;
  });
  return rows;
}

std::vector<SpectrumRecord> gw_transfer_spectrum(const OpticalNetwork& net, const CarrierParams& carrier,
                                                 const FrequencySweep& sweep) {
  return spectrum_at(net, carrier, sweep.grid());
}

std::vector<SpectrumRecord> nsr_spectrum(const OpticalNetwork& net, const CarrierParams& carrier,
                                         const FrequencySweep& sweep) {
  return spectrum_at(net, carrier, sweep.grid());
}

std::string to_string(LaserNoiseKind kind) { return kind == LaserNoiseKind::Frequency ? "frequency" : "intensity"; }

cplx laser_noise_tf(const FieldState& carrier_state, const CarrierParams& carrier, double f, LaserNoiseKind kind) {
  if (!(std::isfinite(f) && f > 0.0)) throw ValidationError("laser noise frequency must be positive");
  const InjectionSpec inj = kind == LaserNoiseKind::Frequency ? InjectionSpec{FrequencyNoiseInjection{}}
                                                              : InjectionSpec{IntensityNoiseInjection{}};
  const SidebandState sb = solve_sidebands(carrier_state.network(), carrier_state, carrier, f, inj);
  return read_detector(carrier_state, &sb).signal;
}

std::vector<cplx> laser_noise_spectrum(const OpticalNetwork& net, const CarrierParams& carrier,
                                       const std::vector<double>& freqs, LaserNoiseKind kind) {
  const FieldState cs = solve_carrier(net, carrier);
  std::vector<cplx> out(freqs.size());
  parallel_for(freqs.size(), freqs, [&](std::size_t i) { out[i] = laser_noise_tf(cs, carrier, freqs[i], kind); });
  return out;
}

ValidationReport validate_against_analytic(const ValidationOptions& o) {
  if (o.grid < 2) throw ValidationError("validation grid needs at least 2 points per axis");
  ValidationReport rep;
  const CarrierParams& carrier = o.carrier;
  const double p0 = carrier.power();

  // Transmission over the bias plane, cell centres so the singular origin is skipped.
  PresetOptions popt;
  popt.length_n = popt.length_e = o.length;
  popt.corrupt_splitter = o.corrupt_splitter;
  const double step = constants::two_pi / static_cast<double>(o.grid);
  for (std::size_t a = 0; a < o.grid; ++a) {
    for (std::size_t b = 0; b < o.grid; ++b) {
      popt.phi_n = -constants::pi + (static_cast<double>(a) + 0.5) * step;
      popt.phi_e = -constants::pi + (static_cast<double>(b) + 0.5) * step;
      if (is_zero_mod_2pi(popt.phi_n) && is_zero_mod_2pi(popt.phi_e)) continue;
      const OpticalNetwork g = build_preset("gmi", popt);
      const double t = read_detector(solve_carrier(g, carrier)).dc_power / p0;
      rep.transmission_dev =
          std::max(rep.transmission_dev, std::abs(t - analytic::ideal_transmission(popt.phi_n, popt.phi_e)));
      ++rep.grid_points;
    }
  }

  const std::vector<double> freqs = o.sweep.grid();

  // Michelson with a small differential offset against the |E_c| = 1 laws.
  PresetOptions mopt;
  mopt.length_n = mopt.length_e = o.length;
  mopt.phi_e = -o.mi_offset;
  mopt.corrupt_splitter = o.corrupt_splitter;
  const OpticalNetwork mi = build_preset("mi", mopt);
  ArmState arms = ArmState::biased(0.0, -o.mi_offset, o.length);
  arms.delta_off = carrier.roundtrip_phase_to_length(o.mi_offset);
  for (const auto& r : spectrum_at(mi, carrier, freqs)) {
    if (r.diverged) continue;
    const double tf = std::abs(analytic::mi_transfer_function(carrier, arms, r.frequency_hz));
    rep.mi_transfer_dev = std::max(rep.mi_transfer_dev, relative_dev(r.tf_mag, tf));
    const auto nsr = analytic::mi_nsr(carrier, o.length, r.frequency_hz);
    if (!nsr.diverged) rep.mi_nsr_dev = std::max(rep.mi_nsr_dev, relative_dev(r.nsr, nsr.value));
  }

  // GMI on its bright fringe.
  popt.phi_n = o.bias;
  popt.phi_e = -o.bias;
  const OpticalNetwork gmi = build_preset("gmi", popt);
  const double ec = std::abs(analytic::cavity_fields({}, ArmState::biased(o.bias, -o.bias, o.length)).average);
  for (const auto& r : spectrum_at(gmi, carrier, freqs)) {
    if (r.diverged) continue;
    const double tf = std::abs(analytic::bright_fringe_transfer(carrier, ec, o.length, r.frequency_hz));
    rep.gmi_transfer_dev = std::max(rep.gmi_transfer_dev, relative_dev(r.tf_mag, tf));
    const auto nsr = analytic::bright_fringe_nsr(carrier, ec, o.length, r.frequency_hz);
    if (!nsr.diverged) rep.gmi_nsr_dev = std::max(rep.gmi_nsr_dev, relative_dev(r.nsr, nsr.value));
  }

  auto check = [&](double dev, double tol, const char* name) {
    if (!(dev <= tol)) {
      std::ostringstream os;
      os << name << " deviation " << dev << " exceeds " << tol;
      rep.failures.push_back(os.str());
    }
  };
  check(rep.transmission_dev, kTransmissionTolerance, "transmission");
  check(rep.mi_transfer_dev, kSpectralTolerance, "MI transfer");
  check(rep.mi_nsr_dev, kSpectralTolerance, "MI NSR");
  check(rep.gmi_transfer_dev, kSpectralTolerance, "GMI transfer");
  check(rep.gmi_nsr_dev, kSpectralTolerance, "GMI NSR");
  rep.passed = rep.failures.empty();
  return rep;
}

}  // namespace ifo::net
