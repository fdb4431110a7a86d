#include "ifo/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace ifo::noise {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (t == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(where + ": cannot parse number '" + t + "'");
  }
}

}  // namespace

std::string to_string(AsdUnit unit) {
  switch (unit) {
    case AsdUnit::HzPerRtHz: return "Hz/rtHz";
    case AsdUnit::WPerRtHz: return "W/rtHz";
    case AsdUnit::MPerRtHz: return "m/rtHz";
    case AsdUnit::StrainPerRtHz: return "strain/rtHz";
  }
  return "?";
}

ParsedUnit parse_unit(const std::string& text) {
  const std::string t = trim(text);
  static const std::pair<const char*, ParsedUnit> table[] = {
      {"Hz/rtHz", {AsdUnit::HzPerRtHz, false}},      {"W/rtHz", {AsdUnit::WPerRtHz, false}},
      {"m/rtHz", {AsdUnit::MPerRtHz, false}},        {"strain/rtHz", {AsdUnit::StrainPerRtHz, false}},
      {"Hz^2/Hz", {AsdUnit::HzPerRtHz, true}},       {"W^2/Hz", {AsdUnit::WPerRtHz, true}},
      {"m^2/Hz", {AsdUnit::MPerRtHz, true}},         {"strain^2/Hz", {AsdUnit::StrainPerRtHz, true}},
      {"1/rtHz", {AsdUnit::StrainPerRtHz, false}},   {"1/Hz", {AsdUnit::StrainPerRtHz, true}},
  };
  for (const auto& [name, unit] : table) {
    if (t == name) return unit;
  }
  throw ValidationError("unknown spectral density unit '" + t + "'");
}

NoiseASD::NoiseASD(std::string name, AsdUnit unit, std::vector<double> freqs, std::vector<double> values)
    : name_(std::move(name)), unit_(unit), freqs_(std::move(freqs)), values_(std::move(values)) {
  if (freqs_.empty()) throw ValidationError("noise curve '" + name_ + "' has no samples");
  if (freqs_.size() != values_.size()) throw ValidationError("noise curve '" + name_ + "' column lengths differ");
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    if (!(std::isfinite(freqs_[i]) && freqs_[i] > 0.0)) {
      throw ValidationError("noise curve '" + name_ + "' has a non-positive frequency");
    }
    if (i > 0 && !(freqs_[i] > freqs_[i - 1])) {
      throw ValidationError("noise curve '" + name_ + "' frequencies must be strictly increasing");
    }
    if (!(values_[i] >= 0.0)) throw ValidationError("noise curve '" + name_ + "' has a negative or NaN value");
  }
}

double NoiseASD::at(double f, std::vector<std::string>* warnings) const {
  if (!(std::isfinite(f) && f > 0.0)) throw ValidationError("query frequency must be positive");
  if (f < freqs_.front() || f > freqs_.back()) {
    if (warnings) {
      std::ostringstream os;
      os << "'" << name_ << "' queried at " << f << " Hz outside [" << freqs_.front() << ", " << freqs_.back()
         << "] Hz; clamped to the nearest sample";
      warnings->push_back(os.str());
    }
    return f < freqs_.front() ? values_.front() : values_.back();
  }
  const auto hi = static_cast<std::size_t>(std::lower_bound(freqs_.begin(), freqs_.end(), f) - freqs_.begin());
  if (freqs_[hi] == f) return values_[hi];
  const std::size_t lo = hi - 1;
  const double v0 = values_[lo];
  const double v1 = values_[hi];
  const double u = (std::log(f) - std::log(freqs_[lo])) / (std::log(freqs_[hi]) - std::log(freqs_[lo]));
  if (std::isinf(v0) || std::isinf(v1)) return std::numeric_limits<double>::infinity();
  if (v0 == 0.0 || v1 == 0.0) return v0 + u * (v1 - v0);  // log undefined; fall back to linear
  return std::exp(std::log(v0) + u * (std::log(v1) - std::log(v0)));
}

std::vector<double> NoiseASD::sample(const std::vector<double>& freqs, std::vector<std::string>* warnings) const {
  std::vector<double> out;
  out.reserve(freqs.size());
  bool warned = false;
  for (double f : freqs) {
    std::vector<std::string> local;
    out.push_back(at(f, &local));
    if (!local.empty() && warnings && !warned) {
      warnings->push_back(local.front() + " (further out-of-band queries not listed)");
      warned = true;
    }
  }
  return out;
}

NoiseASD NoiseASD::scaled(double factor, std::string name) const {
  if (!(std::isfinite(factor) && factor >= 0.0)) throw ValidationError("scale factor must be non-negative");
  std::vector<double> v = values_;
  for (auto& x : v) x *= factor;
  return {std::move(name), unit_, freqs_, std::move(v)};
}

double ctn_strain_asd(double f, double cavity_length) {
  if (!(std::isfinite(f) && f > 0.0)) throw ValidationError("frequency must be positive");
  if (!(std::isfinite(cavity_length) && cavity_length > 0.0)) throw ValidationError("cavity length must be positive");
  return 1.13e-20 * std::pow(100.0 / f, 0.45) / cavity_length;
}

NoiseASD ctn_curve(const std::vector<double>& freqs, double cavity_length) {
  std::vector<double> v;
  v.reserve(freqs.size());
  for (double f : freqs) v.push_back(ctn_strain_asd(f, cavity_length));
  return {"coating_thermal", AsdUnit::StrainPerRtHz, freqs, std::move(v)};
}

NoiseASD project_laser_noise(const NoiseASD& asd, net::LaserNoiseKind kind, const std::vector<double>& freqs,
                             const std::vector<std::complex<double>>& tf, const std::vector<double>& gw_tf_mag,
                             std::vector<std::string>* warnings) {
  const AsdUnit want = kind == net::LaserNoiseKind::Frequency ? AsdUnit::HzPerRtHz : AsdUnit::WPerRtHz;
  if (asd.unit() != want) {
    throw ValidationError("laser " + net::to_string(kind) + " noise needs " + to_string(want) + ", got '" +
                          asd.name() + "' in " + to_string(asd.unit()));
  }
  if (freqs.size() != tf.size() || freqs.size() != gw_tf_mag.size()) {
    throw ValidationError("transfer functions must share the frequency grid");
  }
  if (freqs.empty() || freqs.back() < asd.freqs().front() || freqs.front() > asd.freqs().back()) {
    throw ValidationError("noise curve '" + asd.name() + "' does not overlap the frequency grid");
  }
  const std::vector<double> src = asd.sample(freqs, warnings);
  std::vector<double> out(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (gw_tf_mag[i] == 0.0) {
      out[i] = std::numeric_limits<double>::infinity();
    } else {
      out[i] = src[i] * std::abs(tf[i]) / gw_tf_mag[i];
    }
  }
  return {"laser_" + net::to_string(kind), AsdUnit::StrainPerRtHz, freqs, std::move(out)};
}

NoiseASD shot_floor(const std::vector<net::SpectrumRecord>& rows) {
  std::vector<double> f;
  std::vector<double> v;
  for (const auto& r : rows) {
    f.push_back(r.frequency_hz);
    v.push_back(r.nsr);
  }
  return {"shot", AsdUnit::StrainPerRtHz, std::move(f), std::move(v)};
}

BudgetRecord compose_budget(const std::vector<NoiseASD>& contributions, const std::vector<double>& grid,
                            std::vector<std::string>* warnings) {
  if (contributions.empty()) throw ValidationError("noise budget needs at least one contribution");
  if (grid.empty()) throw ValidationError("noise budget needs a frequency grid");
  BudgetRecord rec;
  rec.freqs = grid;
  rec.total.assign(grid.size(), 0.0);
  for (const auto& c : contributions) {
    if (c.unit() != AsdUnit::StrainPerRtHz) {
      throw ValidationError("budget contribution '" + c.name() + "' is not strain-referred");
    }
    rec.names.push_back(c.name());
    rec.columns.push_back(c.sample(grid, warnings));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double sum = 0.0;
    for (const auto& col : rec.columns) sum += col[i] * col[i];
    rec.total[i] = std::sqrt(sum);
  }
  return rec;
}

BudgetRecord compose_budget(const std::vector<NoiseASD>& contributions) {
  if (contributions.empty()) throw ValidationError("noise budget needs at least one contribution");
  return compose_budget(contributions, contributions.front().freqs());
}

void write_asd_csv(const std::string& path, const NoiseASD& asd) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << "# unit: " << to_string(asd.unit()) << "\n";
  out << "frequency_hz,asd\n";
  for (std::size_t i = 0; i < asd.freqs().size(); ++i) out << fmt(asd.freqs()[i]) << "," << fmt(asd.values()[i]) << "\n";
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

NoiseASD read_asd_csv(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open noise file '" + path + "'");
  std::optional<ParsedUnit> unit;
  bool header = false;
  std::vector<double> f;
  std::vector<double> v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    const std::string where = path + ":" + std::to_string(lineno);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      if (body.rfind("unit:", 0) == 0) unit = parse_unit(body.substr(5));
      continue;
    }
    if (!header) {
      if (t != "frequency_hz,asd") throw ValidationError(where + ": expected header 'frequency_hz,asd'");
      header = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw ValidationError(where + ": expected two columns");
    }
    f.push_back(parse_number(t.substr(0, comma), where));
    v.push_back(parse_number(t.substr(comma + 1), where));
  }
  if (!unit) throw ValidationError(path + ": missing '# unit:' line");
  if (!header) throw ValidationError(path + ": missing header");
  if (unit->is_psd) {
    for (auto& x : v) {
      if (x < 0.0) throw ValidationError(path + ": negative PSD value");
      x = std::sqrt(x);
    }
  }
  const std::string label = name.empty() ? std::filesystem::path(path).stem().string() : name;
  return {label, unit->unit, std::move(f), std::move(v)};
}

}  // namespace ifo::noise
