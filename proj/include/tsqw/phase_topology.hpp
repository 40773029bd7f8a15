#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsqw/parallel.hpp"
#include "tsqw/walk_core.hpp"

namespace tsqw {

enum class LineFamily { RedHS, BlueHS, OrangePurpleNHS };

std::string_view family_name(LineFamily f);

enum class LineId { Red1, Red2, Red3, Blue1, Blue2, Op1, Op2, Op3 };

inline constexpr int kLineCount = 8;

std::string_view line_name(LineId id);
std::optional<LineId> parse_line(std::string_view name);

struct Interval {
  double lo = 0;
  double hi = 0;
  [[nodiscard]] bool contains(double x, double tol = 1e-12) const { return x >= lo - tol && x <= hi + tol; }
};

/// theta2 = slope * theta1 + intercept over theta1_domain.
struct CriticalLine {
  LineId id{};
  LineFamily family{};
  int branch = 0;
  double slope = 0;
  double intercept = 0;
  Interval theta1_domain;
  /// Open theta1 intervals inside the domain where the line is actually gapped.
  std::vector<Interval> gapped;

  [[nodiscard]] double theta2_at(double theta1) const { return slope * theta1 + intercept; }
  [[nodiscard]] CoinAngles at(double theta1) const { return {theta1, theta2_at(theta1)}; }
  [[nodiscard]] bool in_domain(double theta1) const { return theta1_domain.contains(theta1); }
  [[nodiscard]] bool gapless_at(double theta1) const;
  [[nodiscard]] bool high_symmetry() const { return family != LineFamily::OrangePurpleNHS; }
  /// Chebyshev distance from a point of the (theta1, theta2) plane to the segment.
  [[nodiscard]] double chebyshev_distance(double t1, double t2) const;
};

const std::vector<CriticalLine>& critical_lines();
const CriticalLine& critical_line(LineId id);

struct WindingResult {
  double w_raw = 0;
  int w = 0;
  double residual = 0;
  int grid_size = 0;
};

/// Minimum over k of gap_at, refined around the coarse minimum.
double min_gap(const CoinAngles& a, int n_grid = 4096);

/// Throws GaplessInput when the minimum gap is at or below 1e-6.
WindingResult winding_number(const CoinAngles& a, int n_grid = 4096);

/// Winding without the gap precondition (used by diagram kernels).
double winding_raw(const CoinAngles& a, int n_grid);

struct PhaseCell {
  double theta1 = 0;
  double theta2 = 0;
  bool gapless = false;
  int w = 0;
  double w_raw = 0;
  double min_gap = 0;
  LineId nearest_line{};
};

struct PhaseDiagram {
  int resolution = 0;
  int k_grid = 0;
  double gapless_threshold = 0;
  std::vector<PhaseCell> cells;  // row-major: index = i1 * resolution + i2

  [[nodiscard]] const PhaseCell& at(int i1, int i2) const { return cells[static_cast<std::size_t>(i1) * resolution + i2]; }
  [[nodiscard]] double spacing() const { return kTwoPi / (resolution - 1); }
};

/// Grid over [-pi, pi]^2 with `resolution` points per axis. Cells with
/// min-gap below 1.1 grid spacings are flagged gapless.
PhaseDiagram phase_diagram(int resolution, int k_grid, Execution ex = Execution::Parallel);

/// Straightforward serial evaluation through bloch_vector; kept as the
/// reference for the tabulated kernel.
PhaseDiagram phase_diagram_reference(int resolution, int k_grid);

struct GapClosing {
  double k = 0;
  bool high_symmetry = false;
  double energy = 0;  // 0 or pi
};

std::vector<GapClosing> gap_closing_momenta(const CoinAngles& a, double tol = 1e-8);
std::vector<GapClosing> gap_closing_momenta(const CriticalLine& line, double theta1c, double tol = 1e-8);

enum class Dispersion { Linear, Quadratic };

struct MulticriticalPoint {
  CoinAngles angles;
  Dispersion kind{};
  std::pair<LineId, LineId> parent_lines{};
  std::vector<GapClosing> closings;

  [[nodiscard]] bool on_line(LineId id) const { return parent_lines.first == id || parent_lines.second == id; }
};

/// Intersections of slope -1/2 lines with slope 1 lines inside both domains.
const std::vector<MulticriticalPoint>& multicritical_points();

/// Multicritical point of `line` at theta1 (within 1e-9), if any.
std::optional<MulticriticalPoint> find_multicritical(LineId line, double theta1);

/// Log-log slope of gap(k0 + dk) over 50 log-spaced dk in [window/1000, window].
/// k0 defaults to the first high-symmetry closing. Throws FitRejected when R^2 < 0.99.
struct DynamicalExponent {
  double z = 0;
  double r_squared = 0;
  double k0 = 0;
};

DynamicalExponent dynamical_exponent(const MulticriticalPoint& mc, double fit_window = 0.05,
                                     std::optional<double> k0 = std::nullopt);

}  // namespace tsqw
