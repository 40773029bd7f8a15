#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsqw/phase_topology.hpp"

namespace tsqw {

inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputFormat { Csv, Json };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanConfig {
  std::string command;
  int resolution = 201;
  int k_grid = 4096;
  std::optional<LineId> line;
  std::optional<Interval> theta1_range;
  double delta = 1e-2;
  std::string output;  // empty: data to stdout, no manifest
  OutputFormat format = OutputFormat::Csv;
  int jobs = 0;
  int steps = 600;
  int points = 20;
  int r_max = 60;
  std::optional<double> theta1;
  std::optional<double> theta2;
  std::vector<double> offsets{0.1, 0.3};
  double dl = 1e-2;
  std::vector<std::string> only;
  bool list = false;
};

/// key=value lines; '#' starts a comment. Keys match the long flag names.
/// Throws ConfigError on unknown keys or malformed values.
void apply_config_entry(ScanConfig& cfg, const std::string& key, const std::string& value);
void apply_config_file(ScanConfig& cfg, const std::string& path);

/// Checks ranges and required selections; throws ConfigError.
void validate(const ScanConfig& cfg);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string format_number(double v);
void write_table(const Table& t, OutputFormat f, std::ostream& os);

/// Runs one subcommand and returns the process exit code
/// (0 ok, 1 acceptance failure, 2 config error, 3 I/O error, 4 fit failure).
int run_command(const ScanConfig& cfg, std::ostream& out, std::ostream& err);

Table phase_diagram_table(const ScanConfig& cfg);
Table critical_scan_table(const ScanConfig& cfg);
Table exponents_table(const ScanConfig& cfg);
Table rg_flow_table(const ScanConfig& cfg);
Table rg_points_table(const ScanConfig& cfg);
Table wannier_table(const ScanConfig& cfg);
Table velocity_table(const ScanConfig& cfg);
Table winding_trace_table(const ScanConfig& cfg);

}  // namespace tsqw
