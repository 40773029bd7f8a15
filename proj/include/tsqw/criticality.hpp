#pragma once

#include <array>
#include <optional>
#include <vector>

#include "tsqw/phase_topology.hpp"

namespace tsqw {

struct CriticalBloch {
  double d2c = 0;
  double d3c = 0;
  double dd2c = 0;  // d/dk d2c
  double dd3c = 0;  // d/dk d3c
};

CriticalBloch critical_bloch(const CriticalLine& line, double theta1c, double k);

/// F = (d2 d3' - d3 d2') / (d2^2 + d3^2) on the line. On red and blue lines
/// both components carry a common sin k factor, which is cancelled so that F
/// stays regular at k0 in {0, pi}. Throws GapClosingError at a closing.
double curvature_function(const CriticalLine& line, double theta1c, double k);

/// Same as curvature_function but evaluates the affine map outside the
/// nominal domain (the map is 2pi-periodic in theta1 up to branch relabelling).
double curvature_extended(const CriticalLine& line, double theta1c, double k);

/// Family closed forms. Red and blue are expressed through the eta tables;
/// orange-purple is 4 sin(theta)/(cos 2k + 2 cos^2 k cos 2 theta - 3).
double closed_form_curvature(LineFamily family, double theta1c, double k);

struct ClosedFormCoefficients {
  std::array<double, 5> eta_r{};
  std::array<double, 5> eta_b{};
  double zeta1 = 0;
  double zeta2 = 0;
  double zeta3 = 0;
};

std::array<double, 5> eta_red(double theta1c, double k);
std::array<double, 5> eta_blue(double theta1c, double k);

/// Small-dk expansion at k0 in {0, pi}: d2c ~ zeta1 dk^2, d3c ~ zeta2 dk + zeta3 dk^3.
ClosedFormCoefficients analytic_oz_coefficients(const CriticalLine& line, double theta1, double k0);

struct CurvatureSample {
  double k = 0;
  double F = 0;
};

struct OZFit {
  double F_peak = 0;
  double xi_c = 0;
  double xi_sq = 0;  // signed; negative for a dip rather than a peak
  double k0 = 0;
  double window = 0;
  double r_squared = 0;
  int samples_used = 0;
};

/// Linear regression of 1/F on dk^2 for samples with |k - k0| <= window.
/// Throws FitRejected for fewer than 20 usable samples or R^2 < 0.99.
OZFit oz_fit(const std::vector<CurvatureSample>& samples, double k0, double window, double exclusion = 1e-4);

struct OZOptions {
  double max_window = 0.1;
  int samples = 200;
  double exclusion = 1e-4;
};

/// Samples F on the line around k0 and fits. The window is the smaller of
/// max_window and the half width at half maximum of |F|.
OZFit oz_fit_line(const CriticalLine& line, double theta1c, double k0, const OZOptions& opt = {});

/// Half width at half maximum of |F| around k0 (capped at `cap`).
double peak_half_width(const CriticalLine& line, double theta1c, double k0, double cap);

/// Maximises |F| within [guess - half_range, guess + half_range].
double locate_peak(const CriticalLine& line, double theta1c, double guess, double half_range);

struct ExponentOptions {
  std::vector<double> distances;  // default: 20 log-spaced in [1e-3, 1e-1]
  int side = 0;                    // +1 / -1; 0 picks a side inside the gapless domain
  std::optional<double> k0;        // default chosen from the line family and mc kind
  OZOptions oz{};
};

struct ExponentFit {
  double gamma = 0;
  double nu = 0;
  double gamma_err = 0;
  double nu_err = 0;
  double gamma_plain = 0;  // plain log-log slopes, no correction term
  double nu_plain = 0;
  double dist_min = 0;
  double dist_max = 0;
  int side = 0;
  std::vector<double> distances;
  std::vector<double> F_peaks;
  std::vector<double> xis;
  std::vector<double> k0s;
};

/// OZ fit of the transition peak of (line, mc) at theta1c. Without k0 the
/// peak is taken at the high-symmetry closing, or located near the
/// non-high-symmetry closing with positive k.
OZFit transition_peak(const CriticalLine& line, const MulticriticalPoint& mc, double theta1c,
                      std::optional<double> k0 = std::nullopt, const OZOptions& opt = {});

/// Fits log|X| = a - exponent * log(eps) + b * eps for X in {F_peak, xi_c}.
/// Throws std::invalid_argument when the mc point does not host a gapless to
/// gapless transition on this line.
ExponentFit critical_exponents(const CriticalLine& line, const MulticriticalPoint& mc, const ExponentOptions& opt = {});

/// Whether (line, mc) is a transition-hosting pair and which momentum carries the diverging peak.
struct TransitionInfo {
  bool hosts_transition = false;
  bool peak_at_high_symmetry = false;
  double k_guess = 0;
};

TransitionInfo transition_info(const CriticalLine& line, const MulticriticalPoint& mc);

/// Default approach side for a (line, mc) pair.
int default_side(const CriticalLine& line, const MulticriticalPoint& mc, double max_distance = 0.1);

struct SwapEntry {
  double k = 0;
  bool high_symmetry = false;
  double magnitude = 0;      // max |F| near k at distance epsilon
  double magnitude_ref = 0;  // same at the reference distance
  bool diverging = false;
};

struct SwapReport {
  double epsilon = 0;
  double epsilon_ref = 0;
  int side = 0;
  std::vector<SwapEntry> entries;
  std::vector<double> peaked_momenta;
  std::vector<double> suppressed_momenta;
};

/// Linear multicritical points only. A momentum family is diverging when
/// the peak grows faster than sqrt(eps_ref / eps) between eps_ref = min(10 eps, 0.3) and eps.
SwapReport swap_detector(const MulticriticalPoint& mc, const CriticalLine& approach, double epsilon, int side = 0);

}  // namespace tsqw
