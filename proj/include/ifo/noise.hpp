// Strain-referred noise budgets.
//
// Curves are amplitude spectral densities sampled on a strictly increasing
// frequency grid and interpolated linearly in log-log space. Queries outside
// the sampled band clamp to the nearest sample and record a warning.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ifo/core.hpp"
#include "ifo/spectrum.hpp"

namespace ifo::noise {

enum class AsdUnit { HzPerRtHz, WPerRtHz, MPerRtHz, StrainPerRtHz };

std::string to_string(AsdUnit unit);

struct ParsedUnit {
  AsdUnit unit;
  bool is_psd;  // file holds squared values per Hz
};
/// Accepts "Hz/rtHz", "W/rtHz", "m/rtHz", "strain/rtHz" and the PSD forms
/// "Hz^2/Hz", "W^2/Hz", "m^2/Hz", "strain^2/Hz".
ParsedUnit parse_unit(const std::string& text);

class NoiseASD {
 public:
  NoiseASD(std::string name, AsdUnit unit, std::vector<double> freqs, std::vector<double> values);

  const std::string& name() const { return name_; }
  AsdUnit unit() const { return unit_; }
  const std::vector<double>& freqs() const { return freqs_; }
  const std::vector<double>& values() const { return values_; }

  double at(double f, std::vector<std::string>* warnings = nullptr) const;
  std::vector<double> sample(const std::vector<double>& freqs, std::vector<std::string>* warnings = nullptr) const;

  NoiseASD scaled(double factor, std::string name) const;

 private:
  std::string name_;
  AsdUnit unit_;
  std::vector<double> freqs_;
  std::vector<double> values_;
};

/// Coating thermal noise in strain: 1.13e-20 (100 / f)^0.45 / L.
double ctn_strain_asd(double f, double cavity_length);
NoiseASD ctn_curve(const std::vector<double>& freqs, double cavity_length);

/// Strain-referred laser noise: asd(f) |tf(f)| / |gw_tf(f)|. A zero GW
/// transfer yields +inf at that frequency.
NoiseASD project_laser_noise(const NoiseASD& asd, net::LaserNoiseKind kind, const std::vector<double>& freqs,
                             const std::vector<std::complex<double>>& tf, const std::vector<double>& gw_tf_mag,
                             std::vector<std::string>* warnings = nullptr);

/// Shot-noise floor taken from the NSR column of a spectrum.
NoiseASD shot_floor(const std::vector<net::SpectrumRecord>& rows);

struct BudgetRecord {
  std::vector<double> freqs;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;  // one per source, strain/sqrt(Hz)
  std::vector<double> total;
};

/// Root-sum-square of strain contributions on `grid`.
BudgetRecord compose_budget(const std::vector<NoiseASD>& contributions, const std::vector<double>& grid,
                            std::vector<std::string>* warnings = nullptr);
/// Same, on the grid of the first contribution.
BudgetRecord compose_budget(const std::vector<NoiseASD>& contributions);

void write_asd_csv(const std::string& path, const NoiseASD& asd);
/// Reads the two-column format. The curve name defaults to the file stem.
NoiseASD read_asd_csv(const std::string& path, const std::string& name = "");

}  // namespace ifo::noise
