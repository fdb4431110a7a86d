#include <doctest.h>

#include <cmath>
#include <random>

#include "ifo/core.hpp"
#include "support/oracles.hpp"

using namespace ifo;

TEST_CASE("normalize_phase lands in (-pi, pi] and differs by whole turns") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> wide(-1e3, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double x = wide(rng);
    const double y = normalize_phase(x);
    CHECK(y > -constants::pi);
    CHECK(y <= constants::pi);
    const double turns = (x - y) / constants::two_pi;
    CHECK(std::abs(turns - std::round(turns)) < 1e-9);
  }
  CHECK(normalize_phase(-constants::pi) == doctest::Approx(constants::pi));
  CHECK_THROWS_AS(normalize_phase(std::nan("")), ValidationError);
}

TEST_CASE("degree and radian conversions round-trip") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-720.0, 720.0);
  for (int i = 0; i < 1000; ++i) {
    const double deg = d(rng);
    CHECK(std::abs(rad_to_deg(deg_to_rad(deg)) - deg) <= 1e-12 * std::max(1.0, std::abs(deg)));
    CHECK(deg_to_rad(deg) == doctest::Approx(oracle::deg(deg)).epsilon(1e-15));
  }
}

TEST_CASE("zero mod 2pi detection") {
  CHECK(is_zero_mod_2pi(0.0));
  CHECK(is_zero_mod_2pi(4.0 * constants::pi));
  CHECK_FALSE(is_zero_mod_2pi(1e-6));
  CHECK(is_zero_mod_2pi(1e-6, 1e-5));
}

TEST_CASE("carrier parameters") {
  const auto c = CarrierParams::defaults();
  CHECK(c.wavelength() == 1064e-9);
  CHECK(c.power() == 125.0);
  CHECK(c.omega() == doctest::Approx(oracle::omega0(1064e-9)).epsilon(1e-15));
  // One-way length whose round trip 2 k0 L gives the requested phase.
  const double L = c.roundtrip_phase_to_length(0.3);
  CHECK(2.0 * c.wavenumber() * L == doctest::Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(CarrierParams(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(CarrierParams(1e-6, -1.0), ValidationError);
  CHECK_THROWS_AS(CarrierParams(1e-6, INFINITY), ValidationError);
}

TEST_CASE("mirror power budget") {
  const auto m = MirrorParams::from_budget(0.9, 0.09, 0.01, 0.2);
  CHECK(m.r() * m.r() == doctest::Approx(0.9));
  CHECK(m.t() * m.t() == doctest::Approx(0.09));
  CHECK(m.tuning() == 0.2);
  CHECK_THROWS_AS(MirrorParams::from_budget(0.5, 0.4, 0.0), ValidationError);
  CHECK_THROWS_AS(MirrorParams::from_budget(1.1, -0.1, 0.0), ValidationError);

  SUBCASE("minimum loss comes out of reflectance") {
    const auto p = MirrorParams::perfect().with_min_loss(1e-12);
    CHECK(p.loss() == 1e-12);
    CHECK(p.T() == 0.0);
    CHECK(p.R() + p.T() + p.loss() == doctest::Approx(1.0).epsilon(1e-15));
    const auto q = MirrorParams::from_budget(0.5, 0.3, 0.2).with_min_loss(1e-3);
    CHECK(q.loss() == 0.2);  // already above the floor
  }
  SUBCASE("amplitude constructor") {
    const auto a = MirrorParams::from_amplitude(std::sqrt(0.7), 0.1);
    CHECK(a.R() == doctest::Approx(0.7));
    CHECK(a.T() == doctest::Approx(0.2));
  }
}

TEST_CASE("arm state validation") {
  ArmState a = ArmState::biased(0.1, -0.1);
  CHECK(a.mean_length() == 4000.0);
  CHECK(a.common_phase() == doctest::Approx(0.0));
  CHECK(a.differential_phase() == doctest::Approx(0.2));
  a.r_n = 1.2;
  CHECK_THROWS_AS(a.validate(), ValidationError);
  CHECK_THROWS_AS(ArmState::biased(0.0, 0.0, -1.0), ValidationError);
}

TEST_CASE("frequency sweeps") {
  const auto g = FrequencySweep(1.0, 1e4, 200).grid();
  REQUIRE(g.size() == 200);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == 1e4);
  const double ratio = g[1] / g[0];
  for (std::size_t i = 1; i < g.size(); ++i) {
    CHECK(g[i] > g[i - 1]);
    CHECK(g[i] / g[i - 1] == doctest::Approx(ratio).epsilon(1e-9));
  }
  const auto lin = FrequencySweep(10.0, 20.0, 11, Spacing::Linear).grid();
  CHECK(lin[5] == doctest::Approx(15.0));
  CHECK(spacing_from_string("lin") == Spacing::Linear);
  CHECK_THROWS_AS(spacing_from_string("cubic"), ValidationError);
  CHECK_THROWS_AS(FrequencySweep(0.0, 10.0, 5), ValidationError);
  CHECK_THROWS_AS(FrequencySweep(10.0, 1.0, 5), ValidationError);
}

TEST_CASE("GW signal") {
  const auto gw = GwSignal::at_frequency(1e-21, 100.0);
  CHECK(gw.omega() == doctest::Approx(2.0 * constants::pi * 100.0));
  CHECK(gw.wavenumber() == doctest::Approx(gw.omega() / constants::c));
  CHECK_THROWS_AS(GwSignal::at_frequency(1.0, 0.0), ValidationError);
}
