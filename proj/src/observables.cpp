#include "tsqw/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "tsqw/errors.hpp"

namespace tsqw {

namespace {

struct Arc {
  double a;
  double b;
};

/// Pieces of the zone that remain after removing |k - k0| <= delta around each closing.
std::vector<Arc> kept_arcs(const std::vector<GapClosing>& closings, double delta) {
  if (closings.empty()) return {{-kPi, kPi}};
  std::vector<double> ks;
  for (const auto& g : closings) ks.push_back(g.k);
  std::sort(ks.begin(), ks.end());
  std::vector<Arc> out;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double lo = ks[i] + delta;
    const double hi = (i + 1 < ks.size() ? ks[i + 1] : ks.front() + kTwoPi) - delta;
    if (hi > lo) out.push_back({lo, hi});
  }
  return out;
}

int arc_points(const Arc& arc, int n_grid) {
  return std::max(8, static_cast<int>(std::ceil((arc.b - arc.a) / kTwoPi * n_grid)) + 1);
}

}  // namespace

CorrelationSeries wannier_correlation(const CriticalLine& line, double theta1c, double k0, int R_max,
                                      DecayLength source) {
  CorrelationSeries s;
  s.k0 = k0;
  s.source = source;
  if (source == DecayLength::OzWidth) {
    const OZFit fit = oz_fit_line(line, theta1c, k0);
    if (fit.xi_sq <= 0) throw FitRejected("wannier_correlation: curvature has a dip, not an OZ peak, at k0");
    s.F_peak = fit.F_peak;
    s.xi_c = fit.xi_c;
  } else {
    if (!line.high_symmetry()) throw std::invalid_argument("wannier_correlation: peak-height length needs a high-symmetry line");
    s.F_peak = curvature_function(line, theta1c, k0);
    s.xi_c = std::abs(s.F_peak);
  }
  if (R_max < 0) R_max = static_cast<int>(std::min(1e4, std::ceil(10 * s.xi_c)));
  for (int R = 0; R <= R_max; ++R) {
    s.R.push_back(R);
    s.lambda.push_back(std::polar(1.0, k0 * R) * (s.F_peak / (2 * s.xi_c)) * std::exp(-R / s.xi_c));
  }
  return s;
}

std::complex<double> wannier_correlation_numeric(const CriticalLine& line, double theta1c, int R, int n_grid) {
  if (R < 0) throw std::invalid_argument("wannier_correlation_numeric: R must be >= 0");
  if (n_grid < 4096) throw std::invalid_argument("wannier_correlation_numeric: n_grid must be >= 4096");
  const auto closings = gap_closing_momenta(line, theta1c);
  const double h = kTwoPi / n_grid;
  std::complex<double> acc = 0;
  for (int j = 0; j < n_grid; ++j) {
    const double k = -kPi + (j + 0.5) * h;
    bool skip = false;
    for (const auto& g : closings) skip = skip || std::abs(circular_diff(k, g.k)) < 1e-6;
    if (skip) continue;
    double f;
    try {
      f = curvature_function(line, theta1c, k);
    } catch (const GapClosingError&) {
      continue;
    }
    acc += f * std::polar(1.0, k * R);
  }
  return acc / static_cast<double>(n_grid);
}

double group_velocity(const CoinAngles& a, double k, Band band) {
  const BlochCoefficients c = BlochCoefficients::from(a);
  const BlochVector d = c.at(k);
  const double perp2 = d.d2 * d.d2 + d.d3 * d.d3;
  if (perp2 <= 1e-14) throw GapClosingError("group_velocity: evaluated at a gap closing");
  const double v = -c.dk(k).d0 / std::sqrt(perp2);
  return band == Band::Plus ? v : -v;
}

VelocityProfile velocity_profile(const CoinAngles& a, int n_grid) {
  if (n_grid < 1024) throw std::invalid_argument("velocity_profile: n_grid must be >= 1024");
  VelocityProfile p;
  p.v_min = std::numeric_limits<double>::infinity();
  p.v_max = -std::numeric_limits<double>::infinity();
  const double h = kTwoPi / n_grid;
  for (int j = 0; j < n_grid; ++j) {
    const double k = -kPi + (j + 0.5) * h;
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      v = group_velocity(a, k);
      p.v_min = std::min(p.v_min, v);
      p.v_max = std::max(p.v_max, v);
    } catch (const GapClosingError&) {
    }
    p.k.push_back(k);
    p.v.push_back(v);
  }
  for (const auto& g : gap_closing_momenta(a)) p.discontinuities.push_back(g.k);
  return p;
}

double piecewise_constant_deviation(const VelocityProfile& p) {
  std::vector<GapClosing> cl;
  for (double k : p.discontinuities) cl.push_back({k, false, 0});
  double dev = 0;
  for (const Arc& arc : kept_arcs(cl, 1e-6)) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < p.k.size(); ++i) {
      if (!std::isfinite(p.v[i])) continue;
      double k = p.k[i];
      if (k < arc.a) k += kTwoPi;
      if (k <= arc.a || k >= arc.b) continue;
      lo = std::min(lo, p.v[i]);
      hi = std::max(hi, p.v[i]);
    }
    if (hi >= lo) dev = std::max(dev, 0.5 * (hi - lo));
  }
  return dev;
}

double critical_winding_at(const CriticalLine& line, double theta1c, double delta, int n_grid,
                           const std::vector<GapClosing>& closings) {
  const BlochCoefficients c = BlochCoefficients::from(line.at(theta1c));
  double acc = 0;
  for (const Arc& arc : kept_arcs(closings, delta)) {
    const int m = arc_points(arc, n_grid);
    double prev = 0;
    for (int i = 0; i < m; ++i) {
      const double k = arc.a + (arc.b - arc.a) * i / (m - 1);
      const BlochVector d = c.at(k);
      const double ang = std::atan2(d.d3, d.d2);
      if (i > 0) acc += std::remainder(ang - prev, kTwoPi);
      prev = ang;
    }
  }
  return acc / kTwoPi;
}

CriticalWinding critical_winding(const CriticalLine& line, double theta1c, double delta, int n_grid) {
  if (!(delta >= 1e-4 && delta <= 1e-1)) throw std::invalid_argument("critical_winding: delta must lie in [1e-4, 1e-1]");
  if (!line.in_domain(theta1c)) throw std::invalid_argument("critical_winding: theta1c outside line domain");
  const auto closings = gap_closing_momenta(line, theta1c);
  if (closings.empty()) throw GappedInput("critical_winding: gapped sub-domain, use winding_number");
  CriticalWinding w;
  w.delta = delta;
  for (const auto& g : closings) w.excluded.push_back(g.k);
  const double w1 = critical_winding_at(line, theta1c, delta, n_grid, closings);
  const double w2 = critical_winding_at(line, theta1c, delta / 2, n_grid, closings);
  const double w4 = critical_winding_at(line, theta1c, delta / 4, n_grid, closings);
  w.w_c_at_delta = w1;
  w.w_c_raw = (8 * w4 - 6 * w2 + w1) / 3;
  w.w_c = static_cast<int>(std::lround(w.w_c_raw));
  const double twice = 2 * w.w_c_raw;
  w.half_integer = std::abs(twice - std::round(twice)) < 0.05 && std::lround(twice) % 2 != 0;
  return w;
}

std::vector<UnitVectorSample> winding_vector_trace(const CoinAngles& a, int n_grid) {
  const BlochCoefficients c = BlochCoefficients::from(a);
  std::vector<UnitVectorSample> out;
  for (int j = 0; j <= n_grid; ++j) {
    const double k = -kPi + kTwoPi * j / n_grid;
    const BlochVector d = c.at(k);
    const double n = d.transverse();
    if (n < 1e-12) continue;
    out.push_back({k, d.d2 / n, d.d3 / n, out.empty()});
  }
  return out;
}

std::vector<UnitVectorSample> winding_vector_trace(const CriticalLine& line, double theta1c, int n_grid, double delta) {
  const BlochCoefficients c = BlochCoefficients::from(line.at(theta1c));
  std::vector<UnitVectorSample> out;
  for (const Arc& arc : kept_arcs(gap_closing_momenta(line, theta1c), delta)) {
    const int m = arc_points(arc, n_grid);
    for (int i = 0; i < m; ++i) {
      const double k = arc.a + (arc.b - arc.a) * i / (m - 1);
      const BlochVector d = c.at(k);
      const double n = d.transverse();
      out.push_back({k, d.d2 / n, d.d3 / n, i == 0});
    }
  }
  return out;
}

int count_loops(const std::vector<UnitVectorSample>& trace) {
  double acc = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].segment_start) continue;
    acc += std::remainder(std::atan2(trace[i].n3, trace[i].n2) - std::atan2(trace[i - 1].n3, trace[i - 1].n2), kTwoPi);
  }
  return static_cast<int>(std::lround(std::abs(acc) / kTwoPi));
}

}  // namespace tsqw
