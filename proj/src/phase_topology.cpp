#include "tsqw/phase_topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tsqw/errors.hpp"

namespace tsqw {

namespace {

constexpr double kThird = kPi / 3.0;

std::vector<CriticalLine> build_lines() {
  using F = LineFamily;
  const Interval full{-kPi, kPi}, pos{0, kPi}, neg{-kPi, 0};
  const Interval gapA{-2 * kThird, -kThird}, gapB{kThird, 2 * kThird};
  return {
      {LineId::Red1, F::RedHS, 1, -0.5, kPi, pos, {}},
      {LineId::Red2, F::RedHS, 2, -0.5, 0.0, full, {}},
      {LineId::Red3, F::RedHS, 3, -0.5, -kPi, neg, {}},
      {LineId::Blue1, F::BlueHS, 1, -0.5, 0.5 * kPi, full, {}},
      {LineId::Blue2, F::BlueHS, 2, -0.5, -0.5 * kPi, full, {}},
      {LineId::Op1, F::OrangePurpleNHS, 1, 1.0, 0.0, full, {gapA, gapB}},
      {LineId::Op2, F::OrangePurpleNHS, 2, 1.0, kPi, neg, {gapA}},
      {LineId::Op3, F::OrangePurpleNHS, 3, 1.0, -kPi, pos, {gapB}},
  };
}

double transverse_sq(const BlochVector& d) { return d.d2 * d.d2 + d.d3 * d.d3; }

/// d/dk |d_perp|^2 / 2.
double transverse_slope(const BlochCoefficients& c, double k) {
  const BlochVector d = c.at(k);
  const BlochVector dd = c.dk(k);
  return d.d2 * dd.d2 + d.d3 * dd.d3;
}

double grid_k(int j, int n) { return -kPi + kTwoPi * j / n; }

double winding_from_coefficients(const BlochCoefficients& c, const std::vector<MomentumTrig>& trig) {
  const std::size_t n = trig.size();
  double first = 0, prev = 0, acc = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const BlochVector d = c.at(trig[j]);
    const double ang = std::atan2(d.d3, d.d2);
    if (j == 0) {
      first = ang;
    } else {
      acc += std::remainder(ang - prev, kTwoPi);
    }
    prev = ang;
  }
  acc += std::remainder(first - prev, kTwoPi);
  return acc / kTwoPi;
}

std::vector<MomentumTrig> trig_table(int n) {
  std::vector<MomentumTrig> t(n);
  for (int j = 0; j < n; ++j) t[j] = MomentumTrig::at(grid_k(j, n));
  return t;
}

double coarse_min_gap(const BlochCoefficients& c, const std::vector<MomentumTrig>& trig) {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& t : trig) g = std::min(g, gap_at(c.at(t)));
  return g;
}

}  // namespace

std::string_view family_name(LineFamily f) {
  switch (f) {
    case LineFamily::RedHS: return "red";
    case LineFamily::BlueHS: return "blue";
    case LineFamily::OrangePurpleNHS: return "orange-purple";
  }
  return "?";
}

std::string_view line_name(LineId id) {
  static constexpr std::array<std::string_view, kLineCount> names{"red1", "red2", "red3", "blue1",
                                                                   "blue2", "op1", "op2", "op3"};
  return names[static_cast<std::size_t>(id)];
}

std::optional<LineId> parse_line(std::string_view name) {
  for (int i = 0; i < kLineCount; ++i)
    if (line_name(static_cast<LineId>(i)) == name) return static_cast<LineId>(i);
  return std::nullopt;
}

bool CriticalLine::gapless_at(double theta1) const {
  if (!in_domain(theta1)) return false;
  return std::none_of(gapped.begin(), gapped.end(),
                      [&](const Interval& g) { return theta1 > g.lo && theta1 < g.hi; });
}

double CriticalLine::chebyshev_distance(double t1, double t2) const {
  // max(|t1 - t|, |t2 - slope t - b|) is convex in t; its unconstrained
  // minimiser balances both terms, and clamping gives the segment minimum.
  const double r = t2 - theta2_at(t1);
  double t = t1 + std::copysign(std::abs(r) / (1.0 + std::abs(slope)), r * slope);
  t = std::clamp(t, theta1_domain.lo, theta1_domain.hi);
  return std::max(std::abs(t1 - t), std::abs(t2 - theta2_at(t)));
}

const std::vector<CriticalLine>& critical_lines() {
  static const std::vector<CriticalLine> lines = build_lines();
  return lines;
}

const CriticalLine& critical_line(LineId id) { return critical_lines()[static_cast<std::size_t>(id)]; }

double min_gap(const CoinAngles& a, int n_grid) {
  const BlochCoefficients c = BlochCoefficients::from(a);
  int best = 0;
  double g = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_grid; ++j) {
    const double gj = gap_at(c.at(grid_k(j, n_grid)));
    if (gj < g) {
      g = gj;
      best = j;
    }
  }
  const double h = kTwoPi / n_grid;
  const double k0 = grid_k(best, n_grid);
  const double km = golden_max([&](double k) { return -gap_at(c.at(k)); }, k0 - h, k0 + h, 1e-12);
  return std::min(g, gap_at(c.at(km)));
}

double winding_raw(const CoinAngles& a, int n_grid) {
  return winding_from_coefficients(BlochCoefficients::from(a), trig_table(n_grid));
}

WindingResult winding_number(const CoinAngles& a, int n_grid) {
  if (n_grid < 16) throw std::invalid_argument("winding_number: n_grid too small");
  if (min_gap(a) <= 1e-6) throw GaplessInput("winding_number: gapless parameters, use critical_winding");
  WindingResult r;
  r.grid_size = n_grid;
  r.w_raw = winding_raw(a, n_grid);
  r.w = static_cast<int>(std::lround(r.w_raw));
  r.residual = std::abs(r.w_raw - r.w);
  return r;
}

namespace {

LineId nearest_line(double t1, double t2) {
  LineId best = LineId::Red1;
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& l : critical_lines()) {
    const double d = l.chebyshev_distance(t1, t2);
    if (d < dist) {
      dist = d;
      best = l.id;
    }
  }
  return best;
}

void finish_cell(PhaseCell& cell, double threshold) {
  cell.gapless = cell.min_gap < threshold;
  cell.w = cell.gapless ? 0 : static_cast<int>(std::lround(cell.w_raw));
  cell.nearest_line = nearest_line(cell.theta1, cell.theta2);
}

PhaseDiagram empty_diagram(int resolution, int k_grid) {
  if (resolution < 64) throw std::invalid_argument("phase_diagram: resolution must be >= 64");
  if (k_grid < 64) throw std::invalid_argument("phase_diagram: k_grid must be >= 64");
  PhaseDiagram pd;
  pd.resolution = resolution;
  pd.k_grid = k_grid;
  pd.gapless_threshold = 1.1 * pd.spacing();
  pd.cells.resize(static_cast<std::size_t>(resolution) * resolution);
  return pd;
}

double axis(int i, int resolution) {
  if (i == resolution - 1) return kPi;
  return -kPi + kTwoPi * i / (resolution - 1);
}

}  // namespace

PhaseDiagram phase_diagram(int resolution, int k_grid, Execution ex) {
  PhaseDiagram pd = empty_diagram(resolution, k_grid);
  const auto trig = trig_table(k_grid);
  for_each_index(static_cast<std::ptrdiff_t>(pd.cells.size()), ex, [&](std::ptrdiff_t idx) {
    PhaseCell& cell = pd.cells[static_cast<std::size_t>(idx)];
    cell.theta1 = axis(static_cast<int>(idx / resolution), resolution);
    cell.theta2 = axis(static_cast<int>(idx % resolution), resolution);
    const BlochCoefficients c = BlochCoefficients::from({cell.theta1, cell.theta2});
    cell.min_gap = coarse_min_gap(c, trig);
    cell.w_raw = winding_from_coefficients(c, trig);
    finish_cell(cell, pd.gapless_threshold);
  });
  return pd;
}

PhaseDiagram phase_diagram_reference(int resolution, int k_grid) {
  PhaseDiagram pd = empty_diagram(resolution, k_grid);
  for (int i1 = 0; i1 < resolution; ++i1) {
    for (int i2 = 0; i2 < resolution; ++i2) {
      PhaseCell& cell = pd.cells[static_cast<std::size_t>(i1) * resolution + i2];
      cell.theta1 = axis(i1, resolution);
      cell.theta2 = axis(i2, resolution);
      const CoinAngles a{cell.theta1, cell.theta2};
      double g = std::numeric_limits<double>::infinity();
      double first = 0, prev = 0, acc = 0;
      for (int j = 0; j < k_grid; ++j) {
        const BlochVector d = bloch_vector(a, grid_k(j, k_grid));
        g = std::min(g, gap_at(d));
        const double ang = std::atan2(d.d3, d.d2);
        if (j == 0)
          first = ang;
        else
          acc += std::remainder(ang - prev, kTwoPi);
        prev = ang;
      }
      acc += std::remainder(first - prev, kTwoPi);
      cell.min_gap = g;
      cell.w_raw = acc / kTwoPi;
      finish_cell(cell, pd.gapless_threshold);
    }
  }
  return pd;
}

std::vector<GapClosing> gap_closing_momenta(const CoinAngles& a, double tol) {
  constexpr int n = 4096;
  constexpr double coarse_gate = 0.05;
  const BlochCoefficients c = BlochCoefficients::from(a);
  std::vector<double> m(n);
  for (int j = 0; j < n; ++j) m[j] = transverse_sq(c.at(grid_k(j, n)));

  std::vector<GapClosing> out;
  const double h = kTwoPi / n;
  for (int j = 0; j < n; ++j) {
    const double left = m[(j + n - 1) % n], right = m[(j + 1) % n];
    if (!(m[j] <= left && m[j] <= right) || std::sqrt(m[j]) >= coarse_gate) continue;
    const double kj = grid_k(j, n);
    double k = kj;
    const double sa = transverse_slope(c, kj - h), sb = transverse_slope(c, kj + h);
    if (sa < 0 && sb > 0) k = bisect_sign([&](double x) { return transverse_slope(c, x); }, kj - h, kj + h, 1e-13);
    if (transverse_sq(c.at(k)) > m[j]) k = kj;
    const BlochVector d = c.at(k);
    if (gap_at(d) >= tol) continue;
    GapClosing g;
    g.k = canonical_momentum(k);
    if (std::abs(g.k) < 1e-7) g.k = 0.0;
    if (std::abs(std::abs(g.k) - kPi) < 1e-7) g.k = kPi;
    g.high_symmetry = g.k == 0.0 || g.k == kPi;
    g.energy = d.d0 > 0 ? 0.0 : kPi;
    out.push_back(g);
  }
  std::sort(out.begin(), out.end(), [](const GapClosing& x, const GapClosing& y) { return x.k < y.k; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const GapClosing& x, const GapClosing& y) {
                          return std::abs(circular_diff(x.k, y.k)) < 1e-7;
                        }),
            out.end());
  if (out.size() > 1 && std::abs(circular_diff(out.front().k, out.back().k)) < 1e-7) out.pop_back();
  return out;
}

std::vector<GapClosing> gap_closing_momenta(const CriticalLine& line, double theta1c, double tol) {
  if (!line.in_domain(theta1c)) throw std::invalid_argument("gap_closing_momenta: theta1c outside line domain");
  return gap_closing_momenta(line.at(theta1c), tol);
}

namespace {

std::vector<MulticriticalPoint> build_multicritical() {
  std::vector<MulticriticalPoint> out;
  for (const auto& a : critical_lines()) {
    if (a.slope != -0.5) continue;
    for (const auto& b : critical_lines()) {
      if (b.slope != 1.0) continue;
      // -t/2 + a.b = t + b.b
      const double t1 = 2.0 * (a.intercept - b.intercept) / 3.0;
      if (!a.in_domain(t1) || !b.in_domain(t1)) continue;
      MulticriticalPoint mc;
      mc.angles = {t1, a.theta2_at(t1)};
      if (std::abs(mc.angles.theta2) > kPi + 1e-12) continue;
      mc.parent_lines = {a.id, b.id};
      mc.closings = gap_closing_momenta(mc.angles);
      const bool nhs = std::any_of(mc.closings.begin(), mc.closings.end(),
                                   [](const GapClosing& g) { return !g.high_symmetry; });
      mc.kind = nhs ? Dispersion::Linear : Dispersion::Quadratic;
      out.push_back(mc);
    }
  }
  std::sort(out.begin(), out.end(), [](const MulticriticalPoint& x, const MulticriticalPoint& y) {
    if (x.angles.theta1 != y.angles.theta1) return x.angles.theta1 < y.angles.theta1;
    return x.angles.theta2 < y.angles.theta2;
  });
  return out;
}

}  // namespace

const std::vector<MulticriticalPoint>& multicritical_points() {
  static const std::vector<MulticriticalPoint> pts = build_multicritical();
  return pts;
}

std::optional<MulticriticalPoint> find_multicritical(LineId line, double theta1) {
  for (const auto& mc : multicritical_points())
    if (mc.on_line(line) && std::abs(mc.angles.theta1 - theta1) < 1e-9) return mc;
  return std::nullopt;
}

DynamicalExponent dynamical_exponent(const MulticriticalPoint& mc, double fit_window,
                                     std::optional<double> k0) {
  if (!(fit_window > 0 && fit_window <= 0.1)) throw std::invalid_argument("dynamical_exponent: fit_window must be in (0, 0.1]");
  DynamicalExponent out;
  if (k0) {
    out.k0 = *k0;
  } else {
    auto it = std::find_if(mc.closings.begin(), mc.closings.end(), [](const GapClosing& g) { return g.high_symmetry; });
    if (it == mc.closings.end()) throw std::invalid_argument("dynamical_exponent: no high-symmetry closing");
    out.k0 = it->k;
  }
  const auto dk = logspace(fit_window * 1e-3, fit_window, 50);
  std::vector<double> x, y;
  for (double d : dk) {
    x.push_back(std::log(d));
    y.push_back(std::log(gap_at(mc.angles, out.k0 + d)));
  }
  const LinearFit f = linear_fit(x, y);
  out.z = f.slope;
  out.r_squared = f.r_squared;
  if (f.r_squared < 0.99) throw FitRejected("dynamical_exponent: R^2 below 0.99");
  return out;
}

}  // namespace tsqw
