#include "ifo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ifo::scenario {

namespace {

bool is_known_preset(const std::string& name) {
  const auto& names = net::preset_names();
  return name == "custom" || std::find(names.begin(), names.end(), name) != names.end();
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ".") + p;
  return out;
}

std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> parts;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ValidationError("malformed key '" + key + "'");
    parts.push_back(part);
  }
  if (parts.empty()) throw ValidationError("empty key");
  return parts;
}

std::string type_word(const json& v) {
  if (v.is_number()) return "number";
  if (v.is_boolean()) return "boolean";
  if (v.is_string()) return "string";
  if (v.is_array()) return "list of numbers";
  if (v.is_object()) return "table";
  return "null";
}

std::string unit_hint(const std::string& key) {
  static const std::pair<const char*, const char*> suffixes[] = {
      {"_deg", " in degrees"}, {"_m", " in metres"}, {"_w", " in watts"}, {"_hz", " in hertz"}};
  for (const auto& [suffix, hint] : suffixes) {
    const std::string s = suffix;
    if (key.size() > s.size() && key.compare(key.size() - s.size(), s.size(), s) == 0) return hint;
  }
  if (key.rfind("bias_deg.", 0) == 0) return " in degrees";
  return "";
}

void check_leaf_type(const std::string& key, const json& want, const json& got) {
  bool ok = false;
  if (want.is_number()) ok = got.is_number();
  else if (want.is_boolean()) ok = got.is_boolean();
  else if (want.is_string()) ok = got.is_string();
  else if (want.is_array()) ok = got.is_array() && std::all_of(got.begin(), got.end(), [](const json& x) { return x.is_number(); });
  if (!ok) {
    throw ValidationError("unit violation: '" + key + "' expects a " + type_word(want) + unit_hint(key) + ", got " +
                          type_word(got) + " " + got.dump());
  }
}

void collect_leaves(const json& node, std::vector<std::string>& path, std::map<std::string, Provenance>& out) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    path.push_back(it.key());
    if (it.value().is_object() && it.key() != "network") {
      collect_leaves(it.value(), path, out);
    } else {
      out[join(path)] = Provenance::Default;
    }
    path.pop_back();
  }
}

void merge(json& target, const json& source, std::vector<std::string>& path, std::map<std::string, Provenance>& prov,
           Provenance mark) {
  for (auto it = source.begin(); it != source.end(); ++it) {
    path.push_back(it.key());
    const std::string key = join(path);
    if (!target.contains(it.key())) throw ValidationError("unknown key '" + key + "'");
    json& slot = target[it.key()];
    if (it.key() == "network") {
      if (!it.value().is_object()) throw ValidationError("'network' must be a table");
      slot = it.value();
      prov[key] = mark;
    } else if (slot.is_object()) {
      if (!it.value().is_object()) throw ValidationError("'" + key + "' must be a table, got " + type_word(it.value()));
      merge(slot, it.value(), path, prov, mark);
    } else {
      check_leaf_type(key, slot, it.value());
      slot = it.value();
      prov[key] = mark;
    }
    path.pop_back();
  }
}

void apply_set(json& doc, const std::string& assignment, std::map<std::string, Provenance>& prov) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("override '" + assignment + "' must be key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  // Build the nested fragment and merge it, so the same checks apply.
  const auto parts = split_key(key);
  json fragment = value;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) fragment = json{{*it, fragment}};
  std::vector<std::string> path;
  merge(doc, fragment, path, prov, Provenance::Override);
}

double number(const json& doc, const char* section, const char* key) { return doc.at(section).at(key).get<double>(); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

std::size_t count_value(const json& doc, const char* section, const char* key) {
  const double v = number(doc, section, key);
  require(std::isfinite(v) && v >= 0.0 && v == std::floor(v),
          std::string(section) + "." + key + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

double fraction(const json& doc, const char* section, const char* key) {
  const double v = number(doc, section, key);
  require(v >= 0.0 && v <= 1.0, std::string(section) + "." + key + " must lie in [0, 1]");
  return v;
}

MirrorParams custom_mirror(const json& c, const std::string& name) {
  const double T = c.value("T", 0.0);
  const double loss = c.value("loss", 0.0);
  const double R = c.value("R", 1.0 - T - loss);
  try {
    return MirrorParams::from_budget(R, T, loss, deg_to_rad(c.value("tuning_deg", 0.0)));
  } catch (const ValidationError& e) {
    throw ValidationError("network component '" + name + "': " + e.what());
  }
}

net::OpticalNetwork build_custom(const json& spec) {
  static const std::map<std::string, std::vector<std::string>> allowed{
      {"laser", {"name", "type", "power_fraction", "phase_deg"}},
      {"mirror", {"name", "type", "R", "T", "loss", "tuning_deg"}},
      {"beamsplitter", {"name", "type", "R", "T", "loss", "tuning_deg", "pi_side"}},
      {"space", {"name", "type", "length_m", "tuning_deg", "gw_sign"}},
      {"detector", {"name", "type"}},
  };
  for (auto it = spec.begin(); it != spec.end(); ++it) {
    const std::string k = it.key();
    require(k == "components" || k == "connections" || k == "probes" || k == "readout",
            "unknown key 'network." + k + "'");
  }
  require(spec.contains("components") && spec["components"].is_array(), "network.components must be a list");
  net::OpticalNetwork n;
  try {
    for (const auto& c : spec["components"]) {
      require(c.is_object() && c.contains("name") && c.contains("type"), "each network component needs name and type");
      const std::string name = c["name"].get<std::string>();
      const std::string type = c["type"].get<std::string>();
      const auto a = allowed.find(type);
      require(a != allowed.end(), "network component '" + name + "' has unknown type '" + type + "'");
      for (auto it = c.begin(); it != c.end(); ++it) {
        require(std::find(a->second.begin(), a->second.end(), it.key()) != a->second.end(),
                "unknown key '" + it.key() + "' on " + type + " '" + name + "'");
      }
      if (type == "laser") {
        n.add_laser(name, {c.value("power_fraction", 1.0), deg_to_rad(c.value("phase_deg", 0.0))});
      } else if (type == "mirror") {
        n.add_mirror(name, custom_mirror(c, name));
      } else if (type == "beamsplitter") {
        json cc = c;
        if (!cc.contains("R") && !cc.contains("T")) {
          const double loss = cc.value("loss", 0.0);
          cc["R"] = cc["T"] = 0.5 * (1.0 - loss);
        }
        const std::string side = c.value("pi_side", std::string("front"));
        require(side == "front" || side == "back", "pi_side must be 'front' or 'back'");
        n.add_beamsplitter(name, custom_mirror(cc, name), side == "front" ? net::SplitterSide::Front : net::SplitterSide::Back);
      } else if (type == "space") {
        n.add_space(name, c.value("length_m", 0.0), deg_to_rad(c.value("tuning_deg", 0.0)), c.value("gw_sign", 0));
      } else {
        n.add_detector(name);
      }
    }
    if (spec.contains("connections")) {
      for (const auto& e : spec["connections"]) {
        require(e.is_array() && e.size() == 2, "each connection must be a pair of port names");
        n.connect(e[0].get<std::string>(), e[1].get<std::string>());
      }
    }
    if (spec.contains("probes")) {
      for (auto it = spec["probes"].begin(); it != spec["probes"].end(); ++it) n.add_probe(it.key(), it.value().get<std::string>());
    }
    if (spec.contains("readout")) n.set_readout(spec["readout"].get<std::string>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("network: ") + e.what());
  }
  n.finalize();
  return n;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Default: return "default";
    case Provenance::File: return "file";
    case Provenance::Override: return "override";
  }
  return "?";
}

json default_document(const std::string& preset) {
  if (!is_known_preset(preset)) throw ValidationError("unknown preset '" + preset + "'");
  const bool resonant = preset != "custom" && net::preset_is_resonant(preset);
  const bool recycled_gmi = preset == "gmi-pr" || preset == "gmi-sr" || preset == "gmi-dr";

  double phi_n = 0.06, phi_e = -0.06, offset = 0.0, loss = 0.0;
  if (preset == "mi") {
    phi_n = 0.0;
    phi_e = 0.0;
    offset = 0.01;
  } else if (preset == "aligo-simplified") {
    phi_n = 0.0;
    phi_e = 0.0;
    offset = 0.00025;
  } else if (recycled_gmi) {
    phi_n = 0.2;
    phi_e = -0.2;
    loss = 5e-6;
  }
  const std::string rec = preset == "custom" ? "gmi" : preset;

  json doc;
  doc["preset"] = preset;
  doc["carrier"] = {{"wavelength_m", 1064e-9}, {"power_w", 125.0}};
  doc["bias_deg"] = {{"phi_n", phi_n}, {"phi_e", phi_e}, {"offset", offset},
                     {"phi1", 0.0},    {"phi2", 0.0},    {"theta", 0.0}};
  doc["arms"] = {{"length_n_m", 4000.0}, {"length_e_m", 4000.0}};
  doc["mirrors"] = {{"loss", loss},  {"splitter_loss", 0.0},
                    {"end_T", 0.0},  {"coin_T", 0.0},
                    {"min_loss", resonant ? 1e-12 : 0.0}};
  doc["recycling"] = {{"prm_T", net::default_prm_transmission(rec)},
                      {"srm_T", net::default_srm_transmission(rec)},
                      {"itm_T", net::default_itm_transmission(rec)},
                      {"prm_tuning_deg", 0.0},
                      {"srm_tuning_deg", 0.0}};
  doc["sweep"] = {{"f_min_hz", 1.0}, {"f_max_hz", 1e4}, {"points", 200}, {"spacing", "log"}};
  doc["transmission"] = {{"phi_n_deg", json::array({12.0, 32.0, 52.0})}, {"phi_e_points", 3600}};
  doc["noise"] = {{"frequency_asd", ""}, {"intensity_asd", ""}, {"ctn_length_m", 4000.0}, {"include_ctn", true}};
  doc["find_bias"] = {{"target", "gain"}, {"value", 0.5}, {"frequency_hz", 100.0}, {"min_bias_deg", 0.001}};
  doc["validate"] = {{"grid", 50}, {"corrupt_splitter", false}};
  if (preset == "custom") doc["network"] = json::object();
  return doc;
}

bool ScenarioConfig::grover_family() const { return preset.rfind("gmi", 0) == 0 || preset == "custom"; }

double ScenarioConfig::departure_deg() const {
  const double e = phi_e_deg - offset_deg;
  return grover_family() ? -(phi_n_deg + e) : phi_n_deg - e;
}

ArmState ScenarioConfig::arms() const {
  ArmState a;
  a.length_n = length_n_m;
  a.length_e = length_e_m;
  a.r_n = std::sqrt(1.0 - end_T - std::max(mirror_loss, min_loss));
  a.r_e = a.r_n;
  a.phi_n = phi_n();
  a.phi_e = phi_e();
  a.delta_off = delta_off_m();
  a.validate();
  return a;
}

net::PresetOptions ScenarioConfig::preset_options() const {
  net::PresetOptions o;
  o.phi_n = phi_n();
  o.phi_e = phi_e();
  o.phi1 = deg_to_rad(phi1_deg);
  o.phi2 = deg_to_rad(phi2_deg);
  o.theta = deg_to_rad(theta_deg);
  o.length_n = length_n_m;
  o.length_e = length_e_m;
  o.mirror_loss = mirror_loss;
  o.splitter_loss = splitter_loss;
  o.end_T = end_T;
  o.coin_T = coin_T;
  o.min_loss = min_loss;
  o.prm_T = prm_T;
  o.srm_T = srm_T;
  o.itm_T = itm_T;
  o.prm_tuning = deg_to_rad(prm_tuning_deg);
  o.srm_tuning = deg_to_rad(srm_tuning_deg);
  return o;
}

json ScenarioConfig::to_json() const {
  json prov = json::object();
  for (const auto& [k, v] : provenance) prov[k] = to_string(v);
  json derived = {{"phi_n_rad", phi_n()},
                  {"phi_e_rad", phi_e()},
                  {"departure_deg", departure_deg()},
                  {"delta_off_m", delta_off_m()},
                  {"omega0_rad_s", carrier().omega()},
                  {"k0_rad_m", carrier().wavenumber()}};
  return {{"source", source_path.empty() ? json(nullptr) : json(source_path)},
          {"config", resolved},
          {"provenance", prov},
          {"derived", derived}};
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& preset_override,
                                   const std::vector<std::string>& sets, const std::string& origin) {
  json file_doc = json::object();
  if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
    try {
      file_doc = json::parse(text);
    } catch (const json::parse_error& e) {
      std::ostringstream os;
      os << origin << ":" << line_of(text, e.byte) << ": syntax error: " << e.what();
      throw ValidationError(os.str());
    }
    if (!file_doc.is_object()) throw ValidationError(origin + ": top level must be a table");
  }

  std::string preset = "gmi";
  if (file_doc.contains("preset")) {
    if (!file_doc["preset"].is_string()) throw ValidationError("'preset' must be a string");
    preset = file_doc["preset"].get<std::string>();
  }
  for (const auto& s : sets) {
    if (s.rfind("preset=", 0) == 0) preset = s.substr(7);
  }
  if (!preset_override.empty()) preset = preset_override;

  ScenarioConfig cfg;
  cfg.source_path = origin == "<text>" ? "" : origin;
  json doc = default_document(preset);
  std::vector<std::string> path;
  collect_leaves(doc, path, cfg.provenance);
  file_doc.erase("preset");
  merge(doc, file_doc, path, cfg.provenance, Provenance::File);
  for (const auto& s : sets) {
    if (s.rfind("preset=", 0) == 0) continue;
    apply_set(doc, s, cfg.provenance);
  }
  doc["preset"] = preset;
  if (!preset_override.empty()) cfg.provenance["preset"] = Provenance::Override;
  else if (text.find("\"preset\"") != std::string::npos) cfg.provenance["preset"] = Provenance::File;

  cfg.preset = preset;
  cfg.wavelength_m = number(doc, "carrier", "wavelength_m");
  cfg.power_w = number(doc, "carrier", "power_w");
  (void)cfg.carrier();  // validates

  cfg.phi_n_deg = number(doc, "bias_deg", "phi_n");
  cfg.phi_e_deg = number(doc, "bias_deg", "phi_e");
  cfg.offset_deg = number(doc, "bias_deg", "offset");
  cfg.phi1_deg = number(doc, "bias_deg", "phi1");
  cfg.phi2_deg = number(doc, "bias_deg", "phi2");
  cfg.theta_deg = number(doc, "bias_deg", "theta");

  cfg.length_n_m = number(doc, "arms", "length_n_m");
  cfg.length_e_m = number(doc, "arms", "length_e_m");
  require(cfg.length_n_m > 0.0 && cfg.length_e_m > 0.0, "arm lengths must be positive (metres)");

  cfg.mirror_loss = fraction(doc, "mirrors", "loss");
  cfg.splitter_loss = fraction(doc, "mirrors", "splitter_loss");
  cfg.end_T = fraction(doc, "mirrors", "end_T");
  cfg.coin_T = fraction(doc, "mirrors", "coin_T");
  cfg.min_loss = fraction(doc, "mirrors", "min_loss");

  cfg.prm_T = fraction(doc, "recycling", "prm_T");
  cfg.srm_T = fraction(doc, "recycling", "srm_T");
  cfg.itm_T = fraction(doc, "recycling", "itm_T");
  cfg.prm_tuning_deg = number(doc, "recycling", "prm_tuning_deg");
  cfg.srm_tuning_deg = number(doc, "recycling", "srm_tuning_deg");

  cfg.f_min_hz = number(doc, "sweep", "f_min_hz");
  cfg.f_max_hz = number(doc, "sweep", "f_max_hz");
  cfg.points = count_value(doc, "sweep", "points");
  cfg.spacing = spacing_from_string(doc["sweep"]["spacing"].get<std::string>());
  (void)cfg.sweep();  // validates

  cfg.transmission_phi_n_deg = doc["transmission"]["phi_n_deg"].get<std::vector<double>>();
  require(!cfg.transmission_phi_n_deg.empty(), "transmission.phi_n_deg must not be empty");
  cfg.transmission_points = count_value(doc, "transmission", "phi_e_points");
  require(cfg.transmission_points >= 2, "transmission.phi_e_points must be at least 2");

  cfg.frequency_asd = doc["noise"]["frequency_asd"].get<std::string>();
  cfg.intensity_asd = doc["noise"]["intensity_asd"].get<std::string>();
  cfg.ctn_length_m = number(doc, "noise", "ctn_length_m");
  require(cfg.ctn_length_m > 0.0, "noise.ctn_length_m must be positive");
  cfg.include_ctn = doc["noise"]["include_ctn"].get<bool>();

  cfg.find_bias_target = doc["find_bias"]["target"].get<std::string>();
  require(cfg.find_bias_target == "gain" || cfg.find_bias_target == "nsr", "find_bias.target must be 'gain' or 'nsr'");
  cfg.find_bias_value = number(doc, "find_bias", "value");
  cfg.find_bias_frequency_hz = number(doc, "find_bias", "frequency_hz");
  require(cfg.find_bias_frequency_hz > 0.0, "find_bias.frequency_hz must be positive");
  cfg.find_bias_min_deg = number(doc, "find_bias", "min_bias_deg");
  require(cfg.find_bias_min_deg > 0.0 && cfg.find_bias_min_deg < 90.0, "find_bias.min_bias_deg must lie in (0, 90)");

  cfg.validate_grid = count_value(doc, "validate", "grid");
  require(cfg.validate_grid >= 2, "validate.grid must be at least 2");
  cfg.validate_corrupt_splitter = doc["validate"]["corrupt_splitter"].get<bool>();

  for (const double* angle : {&cfg.phi_n_deg, &cfg.phi_e_deg, &cfg.offset_deg, &cfg.phi1_deg, &cfg.phi2_deg,
                              &cfg.theta_deg, &cfg.prm_tuning_deg, &cfg.srm_tuning_deg}) {
    require(std::isfinite(*angle), "angles must be finite");
  }

  if (preset == "custom") {
    cfg.network = doc["network"];
    require(cfg.network.contains("components"), "preset 'custom' needs a network.components list");
  }
  cfg.resolved = doc;
  return cfg;
}

ScenarioConfig parse_scenario(const std::string& path, const std::string& preset_override,
                              const std::vector<std::string>& sets) {
  std::string text;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_scenario_text(text, preset_override, sets, path.empty() ? "<text>" : path);
}

net::OpticalNetwork build_network(const ScenarioConfig& config) {
  if (config.preset == "custom") return build_custom(config.network);
  return net::build_preset(config.preset, config.preset_options());
}

}  // namespace ifo::scenario
