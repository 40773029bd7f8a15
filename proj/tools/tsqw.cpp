#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "tsqw/errors.hpp"
#include "tsqw/scan.hpp"

namespace {

struct Flag {
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"resolution", "grid points per axis (phase-diagram), theta samples (rg-flow)"},
    {"k-grid", "momentum grid size"},
    {"line", "critical line: red1 red2 red3 blue1 blue2 op1 op2 op3"},
    {"theta1-range", "theta1 interval lo:hi in radians"},
    {"delta", "closing exclusion half-width for w_c and line traces"},
    {"output", "data file path; a <output>.manifest.json is written next to it"},
    {"format", "csv or json"},
    {"jobs", "OpenMP worker count (0 keeps the runtime default)"},
    {"steps", "theta samples along the line (critical-scan)"},
    {"points", "log-spaced distances per exponent fit"},
    {"r-max", "largest R for Wannier correlations"},
    {"theta1", "theta1 of a single point, or the multicritical theta1 (wannier)"},
    {"theta2", "theta2 of a single point"},
    {"offsets", "comma-separated distances from the multicritical point (wannier)"},
    {"dl", "flow step"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-step split-step quantum walk: topology and criticality scans"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tsqw::kToolVersion);

  std::map<std::string, std::string> values;
  std::string config_path, only;
  bool list = false;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"phase-diagram", "winding number over the (theta1, theta2) grid"},
      {"critical-scan", "curvature peak, OZ fit, w_c and closings along a critical line"},
      {"exponents", "gamma, nu and z at transition-hosting multicritical points"},
      {"rg-flow", "closed-form and numeric flow right-hand side, fixed and unstable points"},
      {"wannier", "Wannier-state correlations near a multicritical point"},
      {"velocity", "group velocity over the zone"},
      {"winding-trace", "unit winding vector over the zone"},
      {"acceptance", "run the acceptance suite"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    for (const Flag& f : kFlags) sub->add_option(std::string("--") + f.key, values[f.key], f.help);
    sub->add_option("--config", config_path, "key=value file; flags override its entries");
    if (name == "acceptance") {
      sub->add_flag("--list", list, "list criteria without running them");
      sub->add_option("--only", only, "comma-separated criterion keys or ids");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  tsqw::ScanConfig cfg;
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) tsqw::apply_config_file(cfg, config_path);
    cfg.command = app.get_subcommands().front()->get_name();
    const CLI::App* sub = app.get_subcommands().front();
    for (const Flag& f : kFlags)
      if (sub->count(std::string("--") + f.key) > 0) tsqw::apply_config_entry(cfg, f.key, values[f.key]);
    if (!only.empty()) tsqw::apply_config_entry(cfg, "only", only);
    cfg.list = list;
  } catch (const tsqw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return tsqw::run_command(cfg, std::cout, std::cerr);
}
