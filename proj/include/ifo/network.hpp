// Directed port graph of optical components.
//
// Each component owns named ports. An edge joins two ports and carries light
// both ways: the field leaving one port is the field entering its peer. Ports
// left unconnected on mirrors and splitters are open to vacuum, so light leaving
// them is lost and nothing enters.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ifo/core.hpp"

namespace ifo::net {

/// Which face of a splitter carries the pi reflection phase.
enum class SplitterSide { Front, Back };

struct Laser {
  double power_fraction = 1.0;  // share of the carrier power P0
  double phase = 0.0;
};

struct Mirror {
  MirrorParams params = MirrorParams::perfect();
};

struct BeamSplitter {
  MirrorParams params = MirrorParams::from_budget(0.5, 0.5, 0.0);
  SplitterSide pi_side = SplitterSide::Front;
  bool sign_error = false;  // same reflection sign on both faces; breaks unitarity on purpose
};

/// Free propagation. The carrier picks up only `tuning`; sidebands offset by
/// Omega also pick up Omega * length / c. A nonzero gw_sign marks an arm that
/// the strain stretches (+1) or squeezes (-1).
struct Space {
  double length = 0.0;
  double tuning = 0.0;
  int gw_sign = 0;
};

struct Photodetector {};

using ComponentSpec = std::variant<Laser, Mirror, BeamSplitter, Space, Photodetector>;

std::string kind_name(const ComponentSpec& spec);
const std::vector<std::string>& port_names(const ComponentSpec& spec);

struct Component {
  std::string name;
  ComponentSpec spec;
};

struct PortRef {
  std::size_t component;
  std::size_t port;
};

class OpticalNetwork {
 public:
  void add(const std::string& name, ComponentSpec spec);
  void add_laser(const std::string& name, Laser laser = {}) { add(name, laser); }
  void add_mirror(const std::string& name, const MirrorParams& p) { add(name, Mirror{p}); }
  void add_beamsplitter(const std::string& name, const MirrorParams& p,
                        SplitterSide side = SplitterSide::Front, bool sign_error = false) {
    add(name, BeamSplitter{p, side, sign_error});
  }
  void add_space(const std::string& name, double length, double tuning = 0.0, int gw_sign = 0) {
    add(name, Space{length, tuning, gw_sign});
  }
  void add_detector(const std::string& name) { add(name, Photodetector{}); }

  /// Joins "A.p" to "B.q".
  void connect(const std::string& a, const std::string& b);

  /// Records a named power probe reading the field incident on "A.p".
  void add_probe(const std::string& label, const std::string& port);

  /// Selects the readout detector (defaults to the only detector present).
  void set_readout(const std::string& detector);

  /// Checks structure and freezes the port index. Throws StructuralError.
  void finalize();
  bool finalized() const { return finalized_; }

  // Queries, valid after finalize().
  std::size_t port_count() const { return ports_.size(); }
  std::size_t port_index(const std::string& dotted) const;
  std::size_t port_index(std::size_t component, std::size_t port) const;
  const PortRef& port(std::size_t index) const { return ports_.at(index); }
  std::string port_label(std::size_t index) const;
  std::optional<std::size_t> peer(std::size_t index) const;

  const std::vector<Component>& components() const { return components_; }
  std::size_t component_index(const std::string& name) const;
  const Component& component(const std::string& name) const;
  std::size_t count(const std::string& kind) const;

  std::size_t readout() const;  // component index of the readout detector
  const std::map<std::string, std::string>& probes() const { return probes_; }

  /// Mutates a component's parameters in place (used by sweeps over tunings).
  Component& mutable_component(const std::string& name);

 private:
  std::pair<std::size_t, std::size_t> resolve(const std::string& dotted) const;
  void require_finalized() const;

  std::vector<Component> components_;
  std::map<std::string, std::size_t> by_name_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::map<std::string, std::string> probes_;
  std::string readout_name_;

  bool finalized_ = false;
  std::vector<PortRef> ports_;
  std::vector<std::size_t> first_port_;
  std::vector<std::optional<std::size_t>> peer_;
  std::size_t readout_ = 0;
};

}  // namespace ifo::net
