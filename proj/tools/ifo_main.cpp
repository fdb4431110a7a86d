// ifo <mode> --config <path> --out <dir> [--preset <name>] [--set key=value ...]
//
// Exit status: 0 success, 1 validation checks failed, 2 configuration error,
// 3 solver error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ifo/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Interferometer network toolkit"};
  app.set_help_all_flag("--help-all");

  std::string mode;
  std::string config_path;
  std::string out_dir;
  std::string preset;
  std::vector<std::string> sets;

  std::string modes;
  for (const auto& m : ifo::runner::mode_names()) modes += (modes.empty() ? "" : " | ") + m;

  app.add_option("mode", mode, modes)->required()->check(CLI::IsMember(ifo::runner::mode_names()));
  app.add_option("--config,-c", config_path, "Scenario file (JSON); omit for preset defaults");
  app.add_option("--out,-o", out_dir, "Output directory")->required();
  app.add_option("--preset,-p", preset, "Preset name, overrides the file");
  app.add_option("--set,-s", sets, "Dotted key=value override, repeatable")->take_all();
  app.add_flag_callback("--list-presets", [] {
    for (const auto& p : ifo::net::preset_names()) std::cout << p << "\n";
    std::cout << "custom\n";
    std::exit(0);
  }, "Print preset names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ifo::scenario::ScenarioConfig config;
  try {
    config = ifo::scenario::parse_scenario(config_path, preset, sets);
  } catch (const std::exception& e) {
    const int rc = ifo::runner::exit_code_for(e);
    std::cerr << "ifo: " << e.what() << "\n";
    try {
      ifo::runner::write_metadata(out_dir, mode, ifo::runner::error_metadata(mode, e.what(), rc));
    } catch (const std::exception& w) {
      std::cerr << "ifo: " << w.what() << "\n";
    }
    return rc;
  }

  const auto result = ifo::runner::run_sweep(config, ifo::runner::mode_from_string(mode), out_dir);
  for (const auto& w : result.metadata["warnings"]) std::cerr << "ifo: warning: " << w.get<std::string>() << "\n";
  for (const auto& e : result.metadata["errors"]) std::cerr << "ifo: " << e.get<std::string>() << "\n";
  for (const auto& f : result.outputs) std::cout << out_dir << "/" << f << "\n";
  return result.exit_code;
}
