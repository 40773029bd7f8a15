#include "tsqw/rg_flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tsqw/criticality.hpp"
#include "tsqw/errors.hpp"

namespace tsqw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double red_flow(double t) {
  const FlowCoefficients c = FlowCoefficients::at(t);
  return 0.5 * (3 * c.kappa1 - c.kappa1 / (1 + 2 * c.kappa2) - 2 * c.kappa1 / (2 + c.kappa_r) + c.kappa3);
}

double rhs_value(LineFamily f, double theta, FlowSource src) {
  try {
    if (src == FlowSource::Closed) return rg_rhs_closed(f, theta);
    return rg_rhs_numeric(family_line(f), theta);
  } catch (const std::domain_error&) {
    return kNaN;
  }
}

}  // namespace

FlowCoefficients FlowCoefficients::at(double t) {
  return {std::sin(t), std::cos(t), std::sin(2 * t), std::cos(2 * t), 4 * std::cos(t) - std::cos(2 * t)};
}

const CriticalLine& family_line(LineFamily f) {
  switch (f) {
    case LineFamily::RedHS: return critical_line(LineId::Red2);
    case LineFamily::BlueHS: return critical_line(LineId::Blue1);
    case LineFamily::OrangePurpleNHS: break;
  }
  return critical_line(LineId::Op1);
}

double rg_rhs_numeric(const CriticalLine& line, double theta1c, double k0, double h_k, double h_theta) {
  auto F = [&](double t, double k) { return curvature_extended(line, t, k); };
  double f0;
  try {
    f0 = F(theta1c, k0);
  } catch (const GapClosingError&) {
    return kInf;
  }
  auto d2k = [&](double h) { return (F(theta1c, k0 + h) - 2 * f0 + F(theta1c, k0 - h)) / (h * h); };
  auto d1t = [&](double h) { return (F(theta1c + h, k0) - F(theta1c - h, k0)) / (2 * h); };
  const double num = (4 * d2k(h_k / 2) - d2k(h_k)) / 3;
  const double den = (4 * d1t(h_theta / 2) - d1t(h_theta)) / 3;
  if (std::abs(den) < 1e-12) throw std::domain_error("rg_rhs_numeric: dF/dtheta vanishes");
  return 0.5 * num / den;
}

double rg_rhs_closed(LineFamily family, double t) {
  switch (family) {
    case LineFamily::RedHS: return red_flow(t);
    case LineFamily::BlueHS: return red_flow(t - kPi);
    case LineFamily::OrangePurpleNHS: {
      const FlowCoefficients c = FlowCoefficients::at(t);
      if (c.kappa1 == 0) throw std::domain_error("rg_rhs_closed: pole at sin(theta) = 0");
      return c.kappa2 / c.kappa1;
    }
  }
  return kNaN;
}

RGTrajectory integrate_flow(LineFamily family, double theta1_start, double dl, int max_steps) {
  if (!(dl > 0 && dl <= 1e-2)) throw std::invalid_argument("integrate_flow: dl must lie in (0, 1e-2]");
  RGTrajectory tr;
  tr.dl = dl;
  double t = wrap_angle(theta1_start);
  tr.theta.push_back(t);
  auto rhs = [&](double x) { return rhs_value(family, wrap_angle(x), FlowSource::Closed); };
  double r = rhs(t);
  for (int step = 0; step < max_steps; ++step) {
    if (!std::isfinite(r) || std::abs(r) > 1e6) {
      tr.terminal = FlowTerminal::Diverged;
      tr.terminal_theta = t;
      return tr;
    }
    if (std::abs(r) < 1e-6) {
      tr.terminal = FlowTerminal::FixedPoint;
      tr.terminal_theta = t;
      return tr;
    }
    const double next = t + std::clamp(r * dl, -1e-2, 1e-2);
    const double rn = rhs(next);
    if (!std::isfinite(rn) || std::signbit(rn) != std::signbit(r)) {
      // a zero or a pole lies between t and next
      double a = t, b = next;
      if (!std::isfinite(rn)) {
        tr.terminal = FlowTerminal::Diverged;
        tr.terminal_theta = wrap_angle(next);
        tr.theta.push_back(tr.terminal_theta);
        return tr;
      }
      const double x = bisect_sign(rhs, a, b, 1e-14);
      const double h = std::max(std::abs(rhs(x - 1e-13)), std::abs(rhs(x + 1e-13)));
      tr.terminal = h < 1e-3 ? FlowTerminal::FixedPoint : FlowTerminal::Diverged;
      tr.terminal_theta = wrap_angle(x);
      tr.theta.push_back(tr.terminal_theta);
      return tr;
    }
    t = wrap_angle(next);
    r = rn;
    tr.theta.push_back(t);
  }
  tr.terminal = FlowTerminal::MaxSteps;
  tr.terminal_theta = t;
  return tr;
}

FlowPoints classify_flow_points(LineFamily family, int resolution, FlowSource src, Execution ex) {
  if (resolution < 1000) throw std::invalid_argument("classify_flow_points: resolution must be >= 1000");
  const double h = kTwoPi / resolution;
  std::vector<double> grid(resolution), val(resolution);
  for (int j = 0; j < resolution; ++j) grid[j] = -kPi + (j + 0.5) * h;
  for_each_index(resolution, ex, [&](std::ptrdiff_t j) { val[j] = rhs_value(family, grid[j], src); });

  struct Hit {
    double theta;
    bool zero;
    bool attractive;
  };
  std::vector<Hit> hits(resolution, {0, false, false});
  std::vector<char> found(resolution, 0);
  for_each_index(resolution, ex, [&](std::ptrdiff_t j) {
    const int jn = static_cast<int>((j + 1) % resolution);
    const double fa = val[j], fb = val[jn];
    if (!std::isfinite(fa) || !std::isfinite(fb) || std::signbit(fa) == std::signbit(fb)) return;
    const double a = grid[j];
    const double b = a + h;
    auto f = [&](double x) { return rhs_value(family, wrap_angle(x), src); };
    const double x = bisect_sign(f, a, b, 1e-13);
    const double m = std::max(std::abs(f(x - 2e-13)), std::abs(f(x + 2e-13)));
    double th = wrap_angle(x);
    if (th <= -kPi + 1e-12) th = kPi;
    hits[j] = {th, m < 1e-3, fa > 0};
    found[j] = 1;
  });

  FlowPoints out;
  for (int j = 0; j < resolution; ++j) {
    if (!found[j]) continue;
    if (hits[j].zero)
      out.fixed.push_back({hits[j].theta, hits[j].attractive});
    else
      out.unstable.push_back(hits[j].theta);
  }
  auto by_theta = [](const FlowPoint& a, const FlowPoint& b) { return a.theta < b.theta; };
  std::sort(out.fixed.begin(), out.fixed.end(), by_theta);
  std::sort(out.unstable.begin(), out.unstable.end());
  return out;
}

bool near_flow_singularity(LineFamily family, double theta, double radius) {
  static const std::array<FlowPoints, 3> pts = [] {
    std::array<FlowPoints, 3> p;
    for (int f = 0; f < 3; ++f)
      p[f] = classify_flow_points(static_cast<LineFamily>(f), 4000, FlowSource::Closed, Execution::Serial);
    return p;
  }();
  const FlowPoints& fp = pts[static_cast<std::size_t>(family)];
  for (const auto& z : fp.fixed)
    if (std::abs(circular_diff(theta, z.theta)) < radius) return true;
  for (double u : fp.unstable)
    if (std::abs(circular_diff(theta, u)) < radius) return true;
  return false;
}

}  // namespace tsqw
