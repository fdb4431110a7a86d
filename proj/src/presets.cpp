#include "ifo/presets.hpp"

#include <algorithm>

namespace ifo::net {

namespace {

struct Surfaces {
  const PresetOptions& o;

  MirrorParams mirror(double T, double tuning) const {
    const double loss = o.mirror_loss;
    return MirrorParams::from_budget(1.0 - T - loss, T, loss, tuning).with_min_loss(o.min_loss);
  }

  MirrorParams splitter() const {
    const double half = 0.5 * (1.0 - o.splitter_loss);
    return MirrorParams::from_budget(half, half, o.splitter_loss).with_min_loss(o.min_loss);
  }
};

void add_arms(OpticalNetwork& net, const Surfaces& s, const std::string& north_from, const std::string& east_from) {
  net.add_space("sN", s.o.length_n, 0.0, -1);
  net.add_space("sE", s.o.length_e, 0.0, +1);
  net.add_mirror("ETM_N", s.mirror(s.o.end_T, s.o.phi_n));
  net.add_mirror("ETM_E", s.mirror(s.o.end_T, s.o.phi_e));
  net.connect(north_from, "sN.a");
  net.connect("sN.b", "ETM_N.fr");
  net.connect(east_from, "sE.a");
  net.connect("sE.b", "ETM_E.fr");
  net.add_probe("ETM_N", "ETM_N.fr");
  net.add_probe("ETM_E", "ETM_E.fr");
}

OpticalNetwork build_mi(const Surfaces& s) {
  OpticalNetwork net;
  net.add_laser("laser");
  net.add_beamsplitter("BS", s.splitter(), SplitterSide::Front, s.o.corrupt_splitter);
  net.add_detector("DET");
  net.connect("laser.out", "BS.fr1");
  add_arms(net, s, "BS.fr2", "BS.bk1");
  net.connect("BS.bk2", "DET.in");
  net.add_probe("BS", "BS.fr1");
  return net;
}

OpticalNetwork build_gmi(const Surfaces& s, double prm_T, double srm_T) {
  const PresetOptions& o = s.o;
  OpticalNetwork net;
  net.add_laser("laser");
  net.add_beamsplitter("BS1", s.splitter());
  net.add_beamsplitter("BS2", s.splitter(), SplitterSide::Front, o.corrupt_splitter);
  net.add_mirror("M1", s.mirror(o.coin_T, o.phi1));
  net.add_mirror("M2", s.mirror(o.coin_T, o.phi2));
  net.add_space("sC", 0.0, o.theta);
  net.add_detector("DET");

  if (prm_T > 0.0) {
    net.add_mirror("PRM", s.mirror(prm_T, o.prm_tuning));
    net.connect("laser.out", "PRM.bk");
    net.connect("PRM.fr", "BS1.fr1");
    net.add_probe("PRM", "PRM.fr");
  } else {
    net.connect("laser.out", "BS1.fr1");
  }
  net.connect("BS1.fr2", "M1.fr");
  net.connect("BS1.bk1", "sC.a");
  net.connect("sC.b", "BS2.bk1");
  net.connect("BS2.fr2", "M2.fr");
  add_arms(net, s, "BS2.fr1", "BS2.bk2");
  if (srm_T > 0.0) {
    net.add_mirror("SRM", s.mirror(srm_T, o.srm_tuning));
    net.connect("BS1.bk2", "SRM.fr");
    net.connect("SRM.bk", "DET.in");
    net.add_probe("SRM", "SRM.fr");
  } else {
    net.connect("BS1.bk2", "DET.in");
  }
  net.add_probe("BS1", "BS1.fr1");
  net.add_probe("BS2", "BS2.fr2");
  net.add_probe("M1", "M1.fr");
  net.add_probe("M2", "M2.fr");
  return net;
}

OpticalNetwork build_aligo(const Surfaces& s, double prm_T, double srm_T, double itm_T) {
  const PresetOptions& o = s.o;
  OpticalNetwork net;
  net.add_laser("laser");
  net.add_mirror("PRM", s.mirror(prm_T, o.prm_tuning));
  net.add_beamsplitter("BS", s.splitter(), SplitterSide::Front, o.corrupt_splitter);
  net.add_mirror("ITM_N", s.mirror(itm_T, 0.0));
  net.add_mirror("ITM_E", s.mirror(itm_T, 0.0));
  net.add_mirror("SRM", s.mirror(srm_T, o.srm_tuning));
  net.add_detector("DET");
  net.connect("laser.out", "PRM.bk");
  net.connect("PRM.fr", "BS.fr1");
  net.connect("BS.fr2", "ITM_N.bk");
  net.connect("BS.bk1", "ITM_E.bk");
  add_arms(net, s, "ITM_N.fr", "ITM_E.fr");
  net.connect("BS.bk2", "SRM.fr");
  net.connect("SRM.bk", "DET.in");
  net.add_probe("PRM", "PRM.fr");
  net.add_probe("BS", "BS.fr1");
  net.add_probe("ITM", "ITM_N.fr");
  net.add_probe("ITM_E", "ITM_E.fr");
  net.add_probe("ETM", "ETM_N.fr");
  net.add_probe("SRM", "SRM.fr");
  return net;
}

double pick(double configured, double fallback) { return configured >= 0.0 ? configured : fallback; }

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"mi", "gmi", "gmi-pr", "gmi-sr", "gmi-dr", "aligo-simplified"};
  return names;
}

bool preset_is_resonant(const std::string& name) { return name != "mi" && name != "gmi"; }

double default_prm_transmission(const std::string& name) {
  if (name == "gmi-pr") return 0.001;
  if (name == "gmi-dr" || name == "aligo-simplified") return 0.03;
  return 0.0;
}

double default_srm_transmission(const std::string& name) {
  if (name == "gmi-sr" || name == "gmi-dr" || name == "aligo-simplified") return 0.20;
  return 0.0;
}

double default_itm_transmission(const std::string& name) { return name == "aligo-simplified" ? 0.014 : 0.0; }

OpticalNetwork build_preset(const std::string& name, const PresetOptions& options) {
  const auto& names = preset_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string known;
    for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown preset '" + name + "' (known: " + known + ")");
  }
  const Surfaces s{options};
  const double prm = pick(options.prm_T, default_prm_transmission(name));
  const double srm = pick(options.srm_T, default_srm_transmission(name));
  const double itm = pick(options.itm_T, default_itm_transmission(name));

  OpticalNetwork net;
  if (name == "mi") {
    net = build_mi(s);
  } else if (name == "aligo-simplified") {
    net = build_aligo(s, prm, srm, itm);
  } else {
    const bool pr = name == "gmi-pr" || name == "gmi-dr";
    const bool sr = name == "gmi-sr" || name == "gmi-dr";
    net = build_gmi(s, pr ? prm : 0.0, sr ? srm : 0.0);
  }
  net.finalize();
  return net;
}

}  // namespace ifo::net
