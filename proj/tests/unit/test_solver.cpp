#include <doctest.h>

#include <cmath>
#include <random>

#include "ifo/presets.hpp"
#include "ifo/solver.hpp"
#include "support/oracles.hpp"

using namespace ifo;
using namespace ifo::net;

namespace {

OpticalNetwork fabry_perot(const MirrorParams& m1, const MirrorParams& m2, double tuning, double length = 10.0) {
  OpticalNetwork n;
  n.add_laser("laser");
  n.add_mirror("M1", m1);
  n.add_space("s", length, tuning);
  n.add_mirror("M2", m2);
  n.add_detector("DET");
  n.connect("laser.out", "M1.fr");
  n.connect("M1.bk", "s.a");
  n.connect("s.b", "M2.fr");
  n.connect("M2.bk", "DET.in");
  n.add_probe("M2", "M2.fr");
  n.finalize();
  return n;
}

}  // namespace

TEST_CASE("two-mirror cavity matches the bounce sum") {
  const auto carrier = CarrierParams::defaults();
  const double P0 = carrier.power();
  for (double tau : {0.0, 0.3, 1.2, constants::pi / 2.0, 2.9}) {
    for (double R1 : {0.5, 0.9, 0.99}) {
      CAPTURE(tau);
      CAPTURE(R1);
      const auto m1 = MirrorParams::from_budget(R1, 1.0 - R1, 0.0);
      const auto m2 = MirrorParams::from_budget(0.95, 0.05, 0.0);
      const auto net = fabry_perot(m1, m2, tau);
      const auto st = solve_carrier(net, carrier);
      // Round trip: M2 front reflection carries -r2, M1 back reflection +r1.
      const auto ref = std::sqrt(P0) * oracle::bounce_sum(m1.t(), m2.t(), m1.r(), m2.r(), 2.0 * tau + oracle::pi,
                                                          std::exp(oracle::cplx(0.0, tau)), 20000);
      const auto got = st.incoming("DET.in");
      CHECK(std::abs(got - ref) < 1e-9 * std::sqrt(P0));
      CHECK(st.report().residual < kResidualTolerance);
      CHECK(st.exiting_power() == doctest::Approx(P0).epsilon(1e-12));
    }
  }
}

TEST_CASE("impedance-matched cavity on resonance transmits everything") {
  const auto m = MirrorParams::from_budget(0.98, 0.02, 0.0);
  const auto net = fabry_perot(m, m, constants::pi / 2.0);
  const auto st = solve_carrier(net, CarrierParams::defaults());
  CHECK(st.incident_power("DET.in") == doctest::Approx(125.0).epsilon(1e-10));
  // Intracavity buildup 1 / (1 - R) for equal mirrors.
  CHECK(probe_power(st, "M2") == doctest::Approx(125.0 / 0.02).epsilon(1e-10));
  CHECK_THROWS_AS(probe_power(st, "missing"), LookupError);
}

TEST_CASE("lossless resonant cavity is singular") {
  const auto net = fabry_perot(MirrorParams::perfect(), MirrorParams::perfect(), constants::pi / 2.0);
  CHECK_THROWS_AS(solve_carrier(net, CarrierParams::defaults()), ResonanceError);
}

TEST_CASE("energy is conserved across presets with losses") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> phase(-0.5, 0.5);
  const auto carrier = CarrierParams::defaults();
  for (const auto& name : preset_names()) {
    for (int k = 0; k < 5; ++k) {
      PresetOptions o;
      o.phi_n = phase(rng);
      o.phi_e = phase(rng);
      o.phi1 = phase(rng);
      o.mirror_loss = 1e-4;
      o.splitter_loss = 1e-4;
      o.end_T = 1e-3;
      o.min_loss = 1e-6;
      const auto net = build_preset(name, o);
      const auto st = solve_carrier(net, carrier);
      CAPTURE(name);
      CHECK(st.exiting_power() + st.absorbed_power() == doctest::Approx(carrier.power()).epsilon(1e-9));
    }
  }
}

TEST_CASE("corrupted splitter breaks energy conservation") {
  PresetOptions o;
  o.phi_n = 0.3;
  o.phi_e = -0.1;
  o.corrupt_splitter = true;
  const auto net = build_preset("mi", o);
  const auto st = solve_carrier(net, CarrierParams::defaults());
  CHECK(std::abs(st.exiting_power() - 125.0) > 1e-3);
}

TEST_CASE("Michelson dark port follows the differential phase") {
  // Output power of a 50/50 Michelson: P0 sin^2(dphi / 2), up to the splitter
  // convention fixing which port is dark at zero.
  const auto carrier = CarrierParams::defaults();
  for (double d : {0.0, 0.1, 0.7, 2.0}) {
    PresetOptions o;
    o.phi_n = d / 2.0;
    o.phi_e = -d / 2.0;
    const auto net = build_preset("mi", o);
    const auto st = solve_carrier(net, carrier);
    const double p = read_detector(st).dc_power;
    const double s = std::sin(d / 2.0);
    CHECK(p == doctest::Approx(125.0 * s * s).epsilon(1e-10).scale(1e-12));
  }
}

TEST_CASE("shot noise ASD") {
  const auto carrier = CarrierParams::defaults();
  CHECK(shot_noise_asd(2.0, carrier) ==
        doctest::Approx(std::sqrt(2.0 * oracle::hbar * oracle::omega0(1064e-9) * 2.0)).epsilon(1e-14));
  CHECK(shot_noise_asd(0.0, carrier) == 0.0);
}

TEST_CASE("GW sidebands on a Michelson follow the offset transfer") {
  const auto carrier = CarrierParams::defaults();
  PresetOptions o;
  o.phi_n = deg_to_rad(0.01) / 2.0;
  o.phi_e = -deg_to_rad(0.01) / 2.0;
  const auto net = build_preset("mi", o);
  const auto st = solve_carrier(net, carrier);
  const double delta_off = carrier.roundtrip_phase_to_length(deg_to_rad(0.01));
  for (double f : {10.0, 300.0, 5000.0}) {
    const auto sb = solve_sidebands(net, st, carrier, f, GwInjection{});
    const auto r = read_detector(st, &sb);
    const double ref = oracle::offset_transfer(125.0, 1064e-9, 1.0, delta_off, 4000.0, f);
    CAPTURE(f);
    CHECK(std::abs(r.signal) == doctest::Approx(ref).epsilon(1e-6));
  }
  CHECK_THROWS_AS(solve_sidebands(net, st, carrier, 0.0, GwInjection{}), ValidationError);
}

TEST_CASE("sideband solve rejects a state from another network") {
  const auto carrier = CarrierParams::defaults();
  const auto a = build_preset("mi");
  const auto b = build_preset("mi");
  const auto st = solve_carrier(a, carrier);
  CHECK_THROWS_AS(solve_sidebands(b, st, carrier, 10.0, GwInjection{}), ValidationError);
}
