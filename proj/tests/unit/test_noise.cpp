#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "ifo/noise.hpp"
#include "support/oracles.hpp"

using namespace ifo;
using namespace ifo::noise;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& leaf) {
  const auto dir = fs::temp_directory_path() / "ifo_test_noise";
  fs::create_directories(dir);
  return dir / leaf;
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream(p) << body;
}

}  // namespace

TEST_CASE("log-log interpolation reproduces power laws exactly") {
  // A pure power law is a straight line in log-log space, so any two samples
  // reproduce it everywhere between them.
  const std::vector<double> f{1.0, 10.0, 1000.0};
  std::vector<double> v;
  for (double x : f) v.push_back(3e-22 * std::pow(x, -1.7));
  const NoiseASD asd("law", AsdUnit::StrainPerRtHz, f, v);
  for (double q : {1.0, 2.5, 9.99, 10.0, 47.0, 999.0}) {
    CHECK(asd.at(q) == doctest::Approx(3e-22 * std::pow(q, -1.7)).epsilon(1e-12));
  }
}

TEST_CASE("out-of-band queries clamp and warn") {
  const NoiseASD asd("x", AsdUnit::WPerRtHz, {10.0, 100.0}, {1.0, 2.0});
  std::vector<std::string> w;
  CHECK(asd.at(1.0, &w) == 1.0);
  CHECK(asd.at(1e4, &w) == 2.0);
  CHECK(w.size() == 2);
  w.clear();
  asd.sample({1.0, 2.0, 3.0}, &w);
  CHECK(w.size() == 1);
  CHECK_THROWS_AS(asd.at(0.0), ValidationError);
}

TEST_CASE("curve validation") {
  CHECK_THROWS_AS(NoiseASD("a", AsdUnit::WPerRtHz, {}, {}), ValidationError);
  CHECK_THROWS_AS(NoiseASD("a", AsdUnit::WPerRtHz, {1.0, 1.0}, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(NoiseASD("a", AsdUnit::WPerRtHz, {1.0, 2.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(NoiseASD("a", AsdUnit::WPerRtHz, {1.0, 2.0}, {1.0, -1.0}), ValidationError);
  CHECK_THROWS_AS(NoiseASD("a", AsdUnit::WPerRtHz, {0.0, 2.0}, {1.0, 1.0}), ValidationError);
}

TEST_CASE("units") {
  CHECK(parse_unit("Hz/rtHz").unit == AsdUnit::HzPerRtHz);
  CHECK_FALSE(parse_unit("W/rtHz").is_psd);
  CHECK(parse_unit("W^2/Hz").is_psd);
  CHECK(parse_unit("strain/rtHz").unit == AsdUnit::StrainPerRtHz);
  CHECK_THROWS_AS(parse_unit("furlongs"), ValidationError);
  for (auto u : {AsdUnit::HzPerRtHz, AsdUnit::WPerRtHz, AsdUnit::MPerRtHz, AsdUnit::StrainPerRtHz}) {
    CHECK(parse_unit(to_string(u)).unit == u);
  }
}

TEST_CASE("coating thermal anchor") {
  CHECK(ctn_strain_asd(100.0, 4000.0) == doctest::Approx(1.13e-20 / 4000.0).epsilon(1e-15));
  for (double f : {1.0, 33.0, 2000.0}) CHECK(ctn_strain_asd(f, 4000.0) == doctest::Approx(oracle::ctn(f, 4000.0)));
  const auto c = ctn_curve({10.0, 100.0}, 4000.0);
  CHECK(c.unit() == AsdUnit::StrainPerRtHz);
  CHECK(c.name() == "coating_thermal");
  CHECK_THROWS_AS(ctn_strain_asd(-1.0, 4000.0), ValidationError);
}

TEST_CASE("CSV round trip is lossless") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> f;
  std::vector<double> v;
  double x = 1.0;
  for (int i = 0; i < 50; ++i) {
    x *= 1.0 + u(rng);
    f.push_back(x);
    v.push_back(u(rng) * 1e-21);
  }
  const NoiseASD asd("orig", AsdUnit::MPerRtHz, f, v);
  const auto p = scratch("roundtrip.csv");
  write_asd_csv(p.string(), asd);
  const auto back = read_asd_csv(p.string());
  CHECK(back.name() == "roundtrip");
  CHECK(back.unit() == AsdUnit::MPerRtHz);
  CHECK(back.freqs() == f);
  CHECK(back.values() == v);
}

TEST_CASE("PSD files are converted to ASD") {
  const auto p = scratch("psd.csv");
  write_text(p, "# unit: W^2/Hz\nfrequency_hz,asd\n1,4e-18\n10,9e-18\n");
  const auto a = read_asd_csv(p.string(), "rin");
  CHECK(a.name() == "rin");
  CHECK(a.unit() == AsdUnit::WPerRtHz);
  CHECK(a.values()[0] == doctest::Approx(2e-9));
  CHECK(a.values()[1] == doctest::Approx(3e-9));
}

TEST_CASE("malformed files") {
  const auto p = scratch("bad.csv");
  write_text(p, "frequency_hz,asd\n1,2\n");
  CHECK_THROWS_AS(read_asd_csv(p.string()), ValidationError);
  write_text(p, "# unit: W/rtHz\nf,a\n1,2\n");
  CHECK_THROWS_AS(read_asd_csv(p.string()), ValidationError);
  write_text(p, "# unit: W/rtHz\nfrequency_hz,asd\n1,2,3\n");
  CHECK_THROWS_AS(read_asd_csv(p.string()), ValidationError);
  write_text(p, "# unit: W/rtHz\nfrequency_hz,asd\n1,abc\n");
  CHECK_THROWS_AS(read_asd_csv(p.string()), ValidationError);
  CHECK_THROWS_AS(read_asd_csv((scratch("") / "absent.csv").string()), ValidationError);
}

TEST_CASE("budget is the root-sum-square and order does not matter") {
  const std::vector<double> grid{10.0, 100.0, 1000.0};
  const NoiseASD a("a", AsdUnit::StrainPerRtHz, grid, {3e-23, 1e-23, 2e-23});
  const NoiseASD b("b", AsdUnit::StrainPerRtHz, grid, {4e-23, 1e-23, 0.0});
  const NoiseASD c("c", AsdUnit::StrainPerRtHz, grid, {0.0, 1e-23, 5e-23});
  const auto abc = compose_budget({a, b, c});
  const auto cab = compose_budget({c, a, b});
  CHECK(abc.total[0] == doctest::Approx(5e-23));
  CHECK(abc.total[1] == doctest::Approx(std::sqrt(3.0) * 1e-23));
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(abc.total[i] == doctest::Approx(cab.total[i]).epsilon(1e-15));
  CHECK(abc.names == std::vector<std::string>{"a", "b", "c"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const auto& col : abc.columns) CHECK(col[i] <= abc.total[i]);
  }
}

TEST_CASE("budget rejects curves that are not strain-referred") {
  const NoiseASD w("rin", AsdUnit::WPerRtHz, {1.0, 2.0}, {1.0, 1.0});
  CHECK_THROWS_AS(compose_budget({w}), ValidationError);
  CHECK_THROWS_AS(compose_budget({}), ValidationError);
}

TEST_CASE("laser noise projection") {
  const std::vector<double> grid{10.0, 100.0};
  const NoiseASD fn("freq", AsdUnit::HzPerRtHz, {1.0, 1e4}, {1e-6, 1e-6});
  const std::vector<std::complex<double>> tf{{3.0, 4.0}, {0.0, 2.0}};
  const auto s = project_laser_noise(fn, net::LaserNoiseKind::Frequency, grid, tf, {10.0, 0.0});
  CHECK(s.unit() == AsdUnit::StrainPerRtHz);
  CHECK(s.values()[0] == doctest::Approx(1e-6 * 5.0 / 10.0));
  CHECK(std::isinf(s.values()[1]));
  CHECK_THROWS_AS(project_laser_noise(fn, net::LaserNoiseKind::Intensity, grid, tf, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(project_laser_noise(fn, net::LaserNoiseKind::Frequency, grid, {tf[0]}, {1.0, 1.0}), ValidationError);
  const NoiseASD far("far", AsdUnit::HzPerRtHz, {1e5, 1e6}, {1.0, 1.0});
  CHECK_THROWS_AS(project_laser_noise(far, net::LaserNoiseKind::Frequency, grid, tf, {1.0, 1.0}), ValidationError);
}
