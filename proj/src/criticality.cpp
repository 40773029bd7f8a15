#include "tsqw/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsqw/errors.hpp"

namespace tsqw {

namespace {

constexpr double kSingular = 1e-14;

bool is_high_symmetry_k(double k0) {
  const double k = std::abs(canonical_momentum(k0));
  return k < 1e-9 || std::abs(k - kPi) < 1e-9;
}

double curvature_or_nan(const CriticalLine& line, double theta1c, double k) {
  try {
    return curvature_function(line, theta1c, k);
  } catch (const GapClosingError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

CriticalBloch critical_bloch(const CriticalLine& line, double theta1c, double k) {
  if (!line.in_domain(theta1c)) throw std::invalid_argument("critical_bloch: theta1c outside line domain");
  const BlochCoefficients c = BlochCoefficients::from(line.at(theta1c));
  const BlochVector d = c.at(k);
  const BlochVector dd = c.dk(k);
  return {d.d2, d.d3, dd.d2, dd.d3};
}

double curvature_function(const CriticalLine& line, double theta1c, double k) {
  if (!line.in_domain(theta1c)) throw std::invalid_argument("curvature_function: theta1c outside line domain");
  return curvature_extended(line, theta1c, k);
}

double curvature_extended(const CriticalLine& line, double theta1c, double k) {
  const BlochCoefficients c = BlochCoefficients::from(line.at(theta1c));
  double p, q, dp, dq;
  if (line.high_symmetry()) {
    // (d2, d3) / sin k with p2 + q2 = 0 on the line.
    const double a = 0.5 * (c.p2 - c.q2);
    const double s = std::sin(k), s2k = std::sin(2 * k);
    p = 2 * a * s2k;
    dp = 4 * a * std::cos(2 * k);
    q = c.p3 + 3 * c.q3 - 4 * c.q3 * s * s;
    dq = -4 * c.q3 * s2k;
  } else {
    const BlochVector d = c.at(k);
    const BlochVector dd = c.dk(k);
    p = d.d2;
    q = d.d3;
    dp = dd.d2;
    dq = dd.d3;
  }
  const double den = p * p + q * q;
  if (den < kSingular) throw GapClosingError("curvature_function: evaluated at a gap closing");
  return (p * dq - q * dp) / den;
}

std::array<double, 5> eta_red(double t, double k) {
  const double ck2 = std::cos(k) * std::cos(k), ct = std::cos(t);
  return {128 * (1 + 2 * ck2 * ct), std::cos(4 * k), ck2 * ct,
          16 * (1 + ck2 * (3 * ct + 2 * std::cos(2 * t))), 2 * (4 * std::cos(3 * t) + std::cos(4 * t))};
}

std::array<double, 5> eta_blue(double t, double k) {
  const double ck2 = std::cos(k) * std::cos(k), ct = std::cos(t);
  return {128 * (-1 + 2 * ck2 * ct), std::cos(4 * k), ck2 * ct,
          16 * (1 - ck2 * (3 * ct - 2 * std::cos(2 * t))), 2 * (-4 * std::cos(3 * t) + std::cos(4 * t))};
}

double closed_form_curvature(LineFamily family, double t, double k) {
  const double s2k = std::sin(2 * k), c2k = std::cos(2 * k);
  double num = 0, den = 0;
  switch (family) {
    case LineFamily::RedHS: {
      const auto e = eta_red(t, k);
      const double ch = std::cos(t / 2), sh = std::sin(t / 2);
      num = -ch * ch * ch * sh * e[0];
      den = 25 + 7 * e[1] + 16 * e[2] + c2k * e[3] - s2k * s2k * e[4];
      break;
    }
    case LineFamily::BlueHS: {
      const auto e = eta_blue(t, k);
      const double ch = std::cos(t / 2), sh = std::sin(t / 2);
      num = sh * sh * sh * ch * e[0];
      den = 25 + 7 * e[1] - 16 * e[2] + c2k * e[3] - s2k * s2k * e[4];
      break;
    }
    case LineFamily::OrangePurpleNHS: {
      const double ck = std::cos(k);
      num = 4 * std::sin(t);
      den = c2k + 2 * ck * ck * std::cos(2 * t) - 3;
      break;
    }
  }
  if (std::abs(den) < 1e-12) throw GapClosingError("closed_form_curvature: evaluated at a gap closing");
  return num / den;
}

ClosedFormCoefficients analytic_oz_coefficients(const CriticalLine& line, double theta1, double k0) {
  if (!line.high_symmetry()) throw std::invalid_argument("analytic_oz_coefficients: high-symmetry lines only");
  if (!is_high_symmetry_k(k0)) throw std::invalid_argument("analytic_oz_coefficients: k0 must be 0 or pi");
  const double sign = std::abs(canonical_momentum(k0)) < 1e-9 ? 1.0 : -1.0;
  const CoinAngles a = line.at(theta1);
  const double s1 = std::sin(a.theta1), c1 = std::cos(a.theta1);
  const double c2 = std::cos(a.theta2), s2 = std::sin(a.theta2);
  const double c22 = c2 * c2, s22 = s2 * s2;
  ClosedFormCoefficients z;
  z.eta_r = eta_red(theta1, k0);
  z.eta_b = eta_blue(theta1, k0);
  z.zeta1 = sign * 0.5 * (9 * c22 * s1 - s22 * s1 + c1 * std::sin(2 * a.theta2));
  z.zeta2 = sign * (3 * c22 - s22);
  z.zeta3 = sign * (-27 * c22 + s22) / 6.0;
  return z;
}

OZFit oz_fit(const std::vector<CurvatureSample>& samples, double k0, double window, double exclusion) {
  std::vector<double> x, y;
  for (const auto& s : samples) {
    const double dk = circular_diff(s.k, k0);
    if (std::abs(dk) > window || std::abs(dk) < exclusion) continue;
    if (!std::isfinite(s.F) || s.F == 0) continue;
    x.push_back(dk * dk);
    y.push_back(1.0 / s.F);
  }
  if (x.size() < 20) throw FitRejected("oz_fit: fewer than 20 samples inside the window");
  const LinearFit f = linear_fit(x, y);
  OZFit out;
  out.k0 = k0;
  out.window = window;
  out.samples_used = static_cast<int>(x.size());
  out.r_squared = f.r_squared;
  if (f.intercept == 0) throw FitRejected("oz_fit: infinite peak");
  out.F_peak = 1.0 / f.intercept;
  out.xi_sq = f.slope / f.intercept;
  out.xi_c = std::sqrt(std::abs(out.xi_sq));
  if (f.r_squared < 0.99) throw FitRejected("oz_fit: r_squared below 0.99");
  return out;
}

double peak_half_width(const CriticalLine& line, double theta1c, double k0, double cap) {
  constexpr double d_ref = 1e-5;
  auto mag = [&](double d) {
    const double a = std::abs(curvature_or_nan(line, theta1c, k0 + d));
    const double b = std::abs(curvature_or_nan(line, theta1c, k0 - d));
    return std::max(a, b);
  };
  double ref = std::abs(curvature_or_nan(line, theta1c, k0));
  if (!std::isfinite(ref)) ref = mag(d_ref);
  if (!std::isfinite(ref) || ref == 0) return cap;
  const double half = 0.5 * ref;
  const auto grid = logspace(d_ref, cap, 400);
  double prev = 0;
  for (double d : grid) {
    const double m = mag(d);
    if (std::isfinite(m) && m < half) {
      return bisect_sign([&](double x) { return mag(x) - half; }, prev, d, 1e-12 + 1e-9 * d);
    }
    prev = d;
  }
  return cap;
}

double locate_peak(const CriticalLine& line, double theta1c, double guess, double half_range) {
  constexpr int n = 2001;
  auto mag = [&](double k) {
    const double f = std::abs(curvature_or_nan(line, theta1c, k));
    return std::isfinite(f) ? f : -1.0;
  };
  const double h = 2 * half_range / (n - 1);
  int best = 0;
  double bm = -2;
  for (int j = 0; j < n; ++j) {
    const double m = mag(guess - half_range + h * j);
    if (m > bm) {
      bm = m;
      best = j;
    }
  }
  const double kb = guess - half_range + h * best;
  return golden_max(mag, kb - h, kb + h, 1e-13);
}

OZFit oz_fit_line(const CriticalLine& line, double theta1c, double k0, const OZOptions& opt) {
  const double w = std::min(opt.max_window, peak_half_width(line, theta1c, k0, opt.max_window));
  std::vector<CurvatureSample> samples;
  samples.reserve(opt.samples);
  for (int i = 0; i < opt.samples; ++i) {
    const double k = k0 - w + 2 * w * i / (opt.samples - 1);
    const double f = curvature_or_nan(line, theta1c, k);
    if (std::isfinite(f)) samples.push_back({k, f});
  }
  return oz_fit(samples, k0, w * (1 + 1e-12), std::min(opt.exclusion, w / 100));
}

TransitionInfo transition_info(const CriticalLine& line, const MulticriticalPoint& mc) {
  TransitionInfo t;
  if (!mc.on_line(line.id)) return t;
  const bool linear = mc.kind == Dispersion::Linear;
  if (line.high_symmetry()) {
    t.hosts_transition = true;
    t.peak_at_high_symmetry = !linear;
  } else {
    t.hosts_transition = linear;
    t.peak_at_high_symmetry = true;
  }
  for (const auto& g : mc.closings) {
    if (g.high_symmetry == t.peak_at_high_symmetry) {
      t.k_guess = g.k;
      if (t.peak_at_high_symmetry || g.k > 0) break;
    }
  }
  return t;
}

int default_side(const CriticalLine& line, const MulticriticalPoint& mc, double max_distance) {
  const double t = mc.angles.theta1;
  for (int s : {+1, -1}) {
    bool ok = true;
    for (double f : {1e-3, 0.25, 0.5, 0.75, 1.0})
      ok = ok && line.gapless_at(t + s * f * max_distance);
    if (ok) return s;
  }
  throw std::invalid_argument("default_side: no gapless approach side");
}

OZFit transition_peak(const CriticalLine& line, const MulticriticalPoint& mc, double theta1c,
                      std::optional<double> k0, const OZOptions& opt) {
  const TransitionInfo ti = transition_info(line, mc);
  if (!ti.hosts_transition) throw std::invalid_argument("transition_peak: no transition at this point");
  double k = k0.value_or(ti.k_guess);
  if (!k0 && !ti.peak_at_high_symmetry) k = locate_peak(line, theta1c, ti.k_guess, 0.25);
  return oz_fit_line(line, theta1c, k, opt);
}

ExponentFit critical_exponents(const CriticalLine& line, const MulticriticalPoint& mc, const ExponentOptions& opt) {
  if (std::abs(mc.angles.theta2 - line.theta2_at(mc.angles.theta1)) > 1e-9 || !line.in_domain(mc.angles.theta1))
    throw std::invalid_argument("critical_exponents: multicritical point not on line");
  const TransitionInfo ti = transition_info(line, mc);
  if (!ti.hosts_transition)
    throw std::invalid_argument("critical_exponents: multicritical point hosts no gapless-gapless transition");

  ExponentFit out;
  out.distances = opt.distances.empty() ? logspace(1e-3, 1e-1, 20) : opt.distances;
  std::sort(out.distances.begin(), out.distances.end());
  out.dist_min = out.distances.front();
  out.dist_max = out.distances.back();
  out.side = opt.side != 0 ? opt.side : default_side(line, mc, out.dist_max);

  for (double eps : out.distances) {
    const OZFit f = transition_peak(line, mc, mc.angles.theta1 + out.side * eps, opt.k0, opt.oz);
    out.F_peaks.push_back(f.F_peak);
    out.xis.push_back(f.xi_c);
    out.k0s.push_back(f.k0);
  }

  std::vector<double> one(out.distances.size(), 1.0), logd, lf, lx;
  for (std::size_t i = 0; i < out.distances.size(); ++i) {
    logd.push_back(std::log(out.distances[i]));
    lf.push_back(std::log(std::abs(out.F_peaks[i])));
    lx.push_back(std::log(out.xis[i]));
  }
  out.gamma_plain = -linear_fit(logd, lf).slope;
  out.nu_plain = -linear_fit(logd, lx).slope;
  const std::vector<std::vector<double>> cols{one, logd, out.distances};
  const LeastSquares g = least_squares(cols, lf);
  const LeastSquares n = least_squares(cols, lx);
  out.gamma = -g.beta[1];
  out.gamma_err = g.std_errors[1];
  out.nu = -n.beta[1];
  out.nu_err = n.std_errors[1];
  return out;
}

SwapReport swap_detector(const MulticriticalPoint& mc, const CriticalLine& approach, double epsilon, int side) {
  if (mc.kind != Dispersion::Linear) throw std::invalid_argument("swap_detector: quadratic points show no swapping");
  if (!(epsilon >= 1e-3 - 1e-15 && epsilon <= 1e-1 + 1e-15)) throw std::invalid_argument("swap_detector: epsilon must lie in [1e-3, 1e-1]");
  if (!mc.on_line(approach.id)) throw std::invalid_argument("swap_detector: line does not pass through the point");

  SwapReport r;
  r.epsilon = epsilon;
  r.epsilon_ref = std::min(10 * epsilon, 0.3);
  r.side = side != 0 ? side : default_side(approach, mc, r.epsilon_ref);

  auto peak_near = [&](double eps, double k) {
    constexpr int n = 801;
    constexpr double half = 0.05;
    double m = 0;
    for (int j = 0; j < n; ++j) {
      const double f = curvature_or_nan(approach, mc.angles.theta1 + r.side * eps, k - half + 2 * half * j / (n - 1));
      if (std::isfinite(f)) m = std::max(m, std::abs(f));
    }
    return m;
  };
  const double threshold = std::sqrt(r.epsilon_ref / epsilon);
  for (const auto& g : mc.closings) {
    SwapEntry e;
    e.k = g.k;
    e.high_symmetry = g.high_symmetry;
    e.magnitude = peak_near(epsilon, g.k);
    e.magnitude_ref = peak_near(r.epsilon_ref, g.k);
    e.diverging = e.magnitude_ref > 0 && e.magnitude / e.magnitude_ref > threshold;
    (e.diverging ? r.peaked_momenta : r.suppressed_momenta).push_back(g.k);
    r.entries.push_back(e);
  }
  return r;
}

}  // namespace tsqw
