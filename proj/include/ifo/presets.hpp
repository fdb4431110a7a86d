// Named interferometer topologies.
//
//   mi                Michelson: one splitter and two end mirrors.
//   gmi               Grover-Michelson: two splitters and two coin mirrors (M1, M2)
//                     replacing the central splitter, plus two end mirrors.
//   gmi-pr/-sr/-dr    gmi with a power-recycling mirror at the input, a
//                     signal-recycling mirror at the output, or both.
//   aligo-simplified  power- and signal-recycled Michelson with arm cavities.
//
// Arm spaces carry the GW coupling: north is squeezed (-1), east stretched (+1).

#pragma once

#include <string>
#include <vector>

#include "ifo/network.hpp"

namespace ifo::net {

struct PresetOptions {
  // Round-trip tunings (rad). phi_e is the final east tuning, offset included.
  double phi_n = 0.0;
  double phi_e = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double theta = 0.0;

  double length_n = 4000.0;
  double length_e = 4000.0;

  double mirror_loss = 0.0;    // every mirror
  double splitter_loss = 0.0;  // every splitter
  double end_T = 0.0;          // end mirrors (ETMs)
  double coin_T = 0.0;         // M1, M2
  double min_loss = 0.0;       // floor applied to every surface

  // Recycling mirrors; negative means "use the preset default".
  double prm_T = -1.0;
  double srm_T = -1.0;
  double itm_T = -1.0;
  double prm_tuning = 0.0;
  double srm_tuning = 0.0;

  /// Gives the central (or second) splitter the same reflection sign on both
  /// faces. A deliberate defect used as a negative control.
  bool corrupt_splitter = false;
};

const std::vector<std::string>& preset_names();

/// True for topologies with recycling or arm cavities, which receive the
/// minimum-loss floor by default.
bool preset_is_resonant(const std::string& name);

double default_prm_transmission(const std::string& name);
double default_srm_transmission(const std::string& name);
double default_itm_transmission(const std::string& name);

/// Builds and finalizes the named topology. Throws ValidationError for an
/// unknown name.
OpticalNetwork build_preset(const std::string& name, const PresetOptions& options = {});

}  // namespace ifo::net
