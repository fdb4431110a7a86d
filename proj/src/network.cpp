#include "ifo/network.hpp"

#include <cmath>
#include <deque>
#include <set>

namespace ifo::net {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Ports that must be wired for the component to make sense.
bool port_required(const ComponentSpec& spec) {
  return std::holds_alternative<Laser>(spec) || std::holds_alternative<Space>(spec) ||
         std::holds_alternative<Photodetector>(spec);
}

}  // namespace

std::string kind_name(const ComponentSpec& spec) {
  return std::visit(overloaded{[](const Laser&) { return std::string("laser"); },
                               [](const Mirror&) { return std::string("mirror"); },
                               [](const BeamSplitter&) { return std::string("beamsplitter"); },
                               [](const Space&) { return std::string("space"); },
                               [](const Photodetector&) { return std::string("detector"); }},
                    spec);
}

const std::vector<std::string>& port_names(const ComponentSpec& spec) {
  static const std::vector<std::string> kLaserPorts{"out"};
  static const std::vector<std::string> kMirrorPorts{"fr", "bk"};
  static const std::vector<std::string> kSplitterPorts{"fr1", "fr2", "bk1", "bk2"};
  static const std::vector<std::string> kSpacePorts{"a", "b"};
  static const std::vector<std::string> kDetectorPorts{"in"};
  return std::visit(overloaded{[](const Laser&) -> const std::vector<std::string>& { return kLaserPorts; },
                               [](const Mirror&) -> const std::vector<std::string>& { return kMirrorPorts; },
                               [](const BeamSplitter&) -> const std::vector<std::string>& { return kSplitterPorts; },
                               [](const Space&) -> const std::vector<std::string>& { return kSpacePorts; },
                               [](const Photodetector&) -> const std::vector<std::string>& { return kDetectorPorts; }},
                    spec);
}

void OpticalNetwork::add(const std::string& name, ComponentSpec spec) {
  if (finalized_) throw StructuralError("network is finalized; cannot add '" + name + "'");
  if (name.empty() || name.find('.') != std::string::npos) {
    throw StructuralError("invalid component name '" + name + "'");
  }
  if (by_name_.count(name)) throw StructuralError("duplicate component '" + name + "'");
  if (const auto* s = std::get_if<Space>(&spec)) {
    if (!(std::isfinite(s->length) && s->length >= 0.0)) throw ValidationError("space '" + name + "' needs length >= 0");
    if (!std::isfinite(s->tuning)) throw ValidationError("space '" + name + "' tuning must be finite");
    if (s->gw_sign < -1 || s->gw_sign > 1) throw ValidationError("space '" + name + "' gw_sign must be -1, 0 or 1");
  }
  if (const auto* l = std::get_if<Laser>(&spec)) {
    if (!(l->power_fraction >= 0.0) || !std::isfinite(l->phase)) {
      throw ValidationError("laser '" + name + "' needs a non-negative power share and finite phase");
    }
  }
  by_name_[name] = components_.size();
  components_.push_back({name, std::move(spec)});
}

std::pair<std::size_t, std::size_t> OpticalNetwork::resolve(const std::string& dotted) const {
  const auto dot = dotted.find('.');
  if (dot == std::string::npos) throw StructuralError("port reference '" + dotted + "' must be component.port");
  const std::string comp = dotted.substr(0, dot);
  const std::string port = dotted.substr(dot + 1);
  const auto it = by_name_.find(comp);
  if (it == by_name_.end()) throw StructuralError("unknown component in '" + dotted + "'");
  const auto& names = port_names(components_[it->second].spec);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == port) return {it->second, i};
  }
  throw StructuralError("component '" + comp + "' (" + kind_name(components_[it->second].spec) +
                        ") has no port '" + port + "'");
}

void OpticalNetwork::connect(const std::string& a, const std::string& b) {
  if (finalized_) throw StructuralError("network is finalized; cannot connect " + a);
  resolve(a);
  resolve(b);
  if (a == b) throw StructuralError("port " + a + " connected to itself");
  edges_.emplace_back(a, b);
}

void OpticalNetwork::add_probe(const std::string& label, const std::string& port) {
  resolve(port);
  if (probes_.count(label)) throw StructuralError("duplicate probe '" + label + "'");
  probes_[label] = port;
}

void OpticalNetwork::set_readout(const std::string& detector) { readout_name_ = detector; }

void OpticalNetwork::finalize() {
  if (finalized_) return;

  first_port_.assign(components_.size(), 0);
  ports_.clear();
  for (std::size_t c = 0; c < components_.size(); ++c) {
    first_port_[c] = ports_.size();
    for (std::size_t p = 0; p < port_names(components_[c].spec).size(); ++p) ports_.push_back({c, p});
  }
  peer_.assign(ports_.size(), std::nullopt);

  for (const auto& [a, b] : edges_) {
    const auto [ca, pa] = resolve(a);
    const auto [cb, pb] = resolve(b);
    const std::size_t ia = first_port_[ca] + pa;
    const std::size_t ib = first_port_[cb] + pb;
    if (peer_[ia]) throw StructuralError("duplicate connection on port " + a);
    if (peer_[ib]) throw StructuralError("duplicate connection on port " + b);
    peer_[ia] = ib;
    peer_[ib] = ia;
  }

  std::vector<std::size_t> lasers;
  std::vector<std::size_t> detectors;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const auto& spec = components_[c].spec;
    if (std::holds_alternative<Laser>(spec)) lasers.push_back(c);
    if (std::holds_alternative<Photodetector>(spec)) detectors.push_back(c);
    if (port_required(spec)) {
      for (std::size_t p = 0; p < port_names(spec).size(); ++p) {
        if (!peer_[first_port_[c] + p]) {
          throw StructuralError("dangling port " + components_[c].name + "." + port_names(spec)[p]);
        }
      }
    }
  }
  if (lasers.empty()) throw StructuralError("network has no laser");
  if (detectors.empty()) throw StructuralError("network has no photodetector");

  if (readout_name_.empty()) {
    if (detectors.size() > 1) throw StructuralError("several detectors present; select a readout");
    readout_ = detectors.front();
  } else {
    const auto it = by_name_.find(readout_name_);
    if (it == by_name_.end() || !std::holds_alternative<Photodetector>(components_[it->second].spec)) {
      throw StructuralError("readout '" + readout_name_ + "' is not a detector");
    }
    readout_ = it->second;
  }

  // Breadth-first search over components, treating each one as internally connected.
  std::vector<bool> seen(components_.size(), false);
  std::deque<std::size_t> queue(lasers.begin(), lasers.end());
  for (auto l : lasers) seen[l] = true;
  while (!queue.empty()) {
    const std::size_t c = queue.front();
    queue.pop_front();
    const std::size_t n = port_names(components_[c].spec).size();
    for (std::size_t p = 0; p < n; ++p) {
      if (const auto q = peer_[first_port_[c] + p]) {
        const std::size_t next = ports_[*q].component;
        if (!seen[next]) {
          seen[next] = true;
          queue.push_back(next);
        }
      }
    }
  }
  for (auto d : detectors) {
    if (!seen[d]) throw StructuralError("detector '" + components_[d].name + "' is not reachable from a laser");
  }

  finalized_ = true;
}

void OpticalNetwork::require_finalized() const {
  if (!finalized_) throw StructuralError("network must be finalized first");
}

std::size_t OpticalNetwork::port_index(const std::string& dotted) const {
  require_finalized();
  const auto [c, p] = resolve(dotted);
  return first_port_[c] + p;
}

std::size_t OpticalNetwork::port_index(std::size_t component, std::size_t port) const {
  require_finalized();
  return first_port_.at(component) + port;
}

std::string OpticalNetwork::port_label(std::size_t index) const {
  const PortRef& r = ports_.at(index);
  return components_[r.component].name + "." + port_names(components_[r.component].spec)[r.port];
}

std::optional<std::size_t> OpticalNetwork::peer(std::size_t index) const {
  require_finalized();
  return peer_.at(index);
}

std::size_t OpticalNetwork::component_index(const std::string& name) const {
  const auto it = by_name_.find(name);
  if (it == by_name_.end()) throw LookupError("unknown component '" + name + "'");
  return it->second;
}

const Component& OpticalNetwork::component(const std::string& name) const {
  return components_[component_index(name)];
}

Component& OpticalNetwork::mutable_component(const std::string& name) {
  return components_[component_index(name)];
}

std::size_t OpticalNetwork::count(const std::string& kind) const {
  std::size_t n = 0;
  for (const auto& c : components_) n += kind_name(c.spec) == kind ? 1 : 0;
  return n;
}

std::size_t OpticalNetwork::readout() const {
  require_finalized();
  return readout_;
}

}  // namespace ifo::net
