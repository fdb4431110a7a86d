#include "ifo/solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

namespace ifo::net {

namespace {

using constants::c;

struct Coupling {
  std::size_t out_port;
  std::size_t in_port;
  cplx value;
};

// Local scattering entries out <- in for one component, in port-local indices.
void local_couplings(const ComponentSpec& spec, double omega, std::vector<Coupling>& out) {
  out.clear();
  if (const auto* m = std::get_if<Mirror>(&spec)) {
    const double r = m->params.r();
    const double t = m->params.t();
    const double phi = m->params.tuning();
    out.push_back({0, 0, -r * std::polar(1.0, phi)});
    out.push_back({1, 1, r * std::polar(1.0, -phi)});
    out.push_back({0, 1, t});
    out.push_back({1, 0, t});
  } else if (const auto* bs = std::get_if<BeamSplitter>(&spec)) {
    // Ports: fr1 = 0, fr2 = 1, bk1 = 2, bk2 = 3.
    const double r = bs->params.r();
    const double t = bs->params.t();
    const double phi = bs->params.tuning();
    const double front = bs->pi_side == SplitterSide::Front ? -1.0 : 1.0;
    const cplx rf = front * r * std::polar(1.0, phi);
    const cplx rb = (bs->sign_error ? front : -front) * r * std::polar(1.0, -phi);
    out.push_back({1, 0, rf});
    out.push_back({0, 1, rf});
    out.push_back({3, 2, rb});
    out.push_back({2, 3, rb});
    out.push_back({2, 0, t});
    out.push_back({0, 2, t});
    out.push_back({3, 1, t});
    out.push_back({1, 3, t});
  } else if (const auto* s = std::get_if<Space>(&spec)) {
    const cplx f = std::polar(1.0, s->tuning + omega * s->length / c);
    out.push_back({1, 0, f});
    out.push_back({0, 1, f});
  }
}

Eigen::MatrixXcd assemble(const OpticalNetwork& net, double omega) {
  const std::size_t n = net.port_count();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<Coupling> local;
  const auto& comps = net.components();
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    local_couplings(comps[ci].spec, omega, local);
    for (const auto& k : local) {
      const auto src = net.peer(net.port_index(ci, k.in_port));
      if (!src) continue;  // open port, nothing enters
      const auto row = static_cast<Eigen::Index>(net.port_index(ci, k.out_port));
      m(row, static_cast<Eigen::Index>(*src)) -= k.value;
    }
  }
  return m;
}

FieldState solve_system(const OpticalNetwork& net, double omega, const Eigen::VectorXcd& rhs, const char* what) {
  if (!net.finalized()) throw StructuralError("network must be finalized before solving");
  const Eigen::MatrixXcd m = assemble(net, omega);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);

  SolveReport report;
  const double rcond = lu.rcond();
  report.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(report.condition_estimate < kConditionSingular)) {
    std::ostringstream os;
    os << what << " system is singular (condition estimate " << report.condition_estimate
       << "): lossless perfect resonance";
    throw ResonanceError(os.str());
  }
  if (report.condition_estimate > kConditionWarning) {
    std::ostringstream os;
    os << what << " system ill-conditioned: condition estimate " << report.condition_estimate;
    report.warnings.push_back(os.str());
  }

  Eigen::VectorXcd x = lu.solve(rhs);
  x += lu.solve(rhs - m * x);
  const double scale = m.cwiseAbs().rowwise().sum().maxCoeff() * x.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();
  report.residual = scale > 0.0 ? (rhs - m * x).cwiseAbs().maxCoeff() / scale : 0.0;
  if (!(report.residual <= kResidualTolerance)) {
    std::ostringstream os;
    os << what << " residual " << report.residual << " exceeds tolerance";
    throw SolverError(os.str());
  }

  std::vector<cplx> out(x.data(), x.data() + x.size());
  return FieldState(net, std::move(out), omega, std::move(report));
}

}  // namespace

FieldState::FieldState(const OpticalNetwork& net, std::vector<cplx> outgoing, double offset_omega, SolveReport report)
    : net_(&net), out_(std::move(outgoing)), offset_omega_(offset_omega), report_(std::move(report)) {}

cplx FieldState::incoming(std::size_t index) const {
  const auto p = net_->peer(index);
  return p ? out_.at(*p) : cplx{};
}

double FieldState::exiting_power() const {
  double total = 0.0;
  for (std::size_t i = 0; i < out_.size(); ++i) {
    const auto& spec = net_->components()[net_->port(i).component].spec;
    if (!net_->peer(i)) total += std::norm(out_[i]);
    if (std::holds_alternative<Photodetector>(spec) || std::holds_alternative<Laser>(spec)) {
      total += std::norm(incoming(i));
    }
  }
  return total;
}

double FieldState::absorbed_power() const {
  double total = 0.0;
  for (std::size_t i = 0; i < out_.size(); ++i) {
    const auto& spec = net_->components()[net_->port(i).component].spec;
    if (const auto* m = std::get_if<Mirror>(&spec)) total += m->params.loss() * std::norm(incoming(i));
    if (const auto* b = std::get_if<BeamSplitter>(&spec)) total += b->params.loss() * std::norm(incoming(i));
  }
  return total;
}

FieldState solve_carrier(const OpticalNetwork& net, const CarrierParams& carrier) {
  if (!net.finalized()) throw StructuralError("network must be finalized before solving");
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(net.port_count()));
  const auto& comps = net.components();
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    if (const auto* l = std::get_if<Laser>(&comps[ci].spec)) {
      rhs(static_cast<Eigen::Index>(net.port_index(ci, 0))) =
          std::polar(std::sqrt(carrier.power() * l->power_fraction), l->phase);
    }
  }
  return solve_system(net, 0.0, rhs, "carrier");
}

SidebandState solve_sidebands(const OpticalNetwork& net, const FieldState& carrier_state,
                              const CarrierParams& carrier, double f, const InjectionSpec& injection) {
  if (!(std::isfinite(f) && f > 0.0)) throw ValidationError("sideband frequency must be positive");
  if (&carrier_state.network() != &net) throw ValidationError("carrier state was solved on a different network");
  const double omega = constants::two_pi * f;
  const auto n = static_cast<Eigen::Index>(net.port_count());
  Eigen::VectorXcd up = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd lo = Eigen::VectorXcd::Zero(n);
  const auto& comps = net.components();
  const cplx j{0.0, 1.0};

  if (const auto* gw = std::get_if<GwInjection>(&injection)) {
    if (!(std::isfinite(gw->h0) && std::isfinite(gw->phase))) throw ValidationError("GW injection must be finite");
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
      const auto* s = std::get_if<Space>(&comps[ci].spec);
      if (!s || s->gw_sign == 0 || s->length == 0.0) continue;
      // One-way phase modulation envelope over this arm, applied where the
      // light leaves the space in either direction.
      const double depth = gw->h0 * carrier.omega() / omega * std::sin(omega * s->length / (2.0 * c));
      const double retard = omega * s->length / c;
      const cplx k = -j * static_cast<double>(s->gw_sign) * depth / 2.0;
      const cplx ku = k * std::polar(1.0, retard - gw->phase);
      const cplx kl = k * std::polar(1.0, gw->phase - retard);
      for (std::size_t p = 0; p < 2; ++p) {
        const std::size_t exit = net.port_index(ci, p);
        up(static_cast<Eigen::Index>(exit)) += ku * carrier_state.outgoing(exit);
        lo(static_cast<Eigen::Index>(exit)) += kl * carrier_state.outgoing(exit);
      }
    }
  } else {
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
      const auto* l = std::get_if<Laser>(&comps[ci].spec);
      if (!l) continue;
      const std::size_t port = net.port_index(ci, 0);
      const cplx a0 = carrier_state.outgoing(port);
      cplx coef;
      if (const auto* fn = std::get_if<FrequencyNoiseInjection>(&injection)) {
        coef = j * (fn->asd / f) / 2.0;
      } else {
        const double p_laser = carrier.power() * l->power_fraction;
        if (!(p_laser > 0.0)) throw ValidationError("intensity noise needs a laser with positive power");
        coef = std::get<IntensityNoiseInjection>(injection).asd / (4.0 * p_laser);
      }
      up(static_cast<Eigen::Index>(port)) += coef * a0;
      lo(static_cast<Eigen::Index>(port)) += coef * a0;
    }
  }

  return {f, solve_system(net, omega, up, "upper sideband"), solve_system(net, -omega, lo, "lower sideband")};
}

DetectorReading read_detector(const FieldState& carrier_state, const SidebandState* sidebands) {
  const OpticalNetwork& net = carrier_state.network();
  const std::size_t port = net.port_index(net.readout(), 0);
  const cplx ec = carrier_state.incoming(port);
  DetectorReading r{std::norm(ec), {}};
  if (sidebands) {
    r.signal = std::conj(ec) * sidebands->upper.incoming(port) + ec * std::conj(sidebands->lower.incoming(port));
  }
  return r;
}

double shot_noise_asd(double dc_power, const CarrierParams& carrier) {
  if (!(dc_power >= 0.0)) throw ValidationError("detector power must be non-negative");
  return std::sqrt(2.0 * constants::hbar * carrier.omega() * dc_power);
}

std::map<std::string, double> power_budget(const FieldState& carrier_state) {
  std::map<std::string, double> out;
  for (const auto& [label, port] : carrier_state.network().probes()) out[label] = carrier_state.incident_power(port);
  return out;
}

double probe_power(const FieldState& carrier_state, const std::string& label) {
  const auto& probes = carrier_state.network().probes();
  const auto it = probes.find(label);
  if (it == probes.end()) throw LookupError("no power probe named '" + label + "'");
  return carrier_state.incident_power(it->second);
}

}  // namespace ifo::net
