#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "tsqw/criticality.hpp"

namespace tsqw {

enum class DecayLength {
  OzWidth,     // xi_c from the Ornstein-Zernike fit
  PeakHeight,  // xi_c = |F(theta1c, k0)|, the leading-order identity at high-symmetry k0
};

struct CorrelationSeries {
  std::vector<int> R;
  std::vector<std::complex<double>> lambda;
  double xi_c = 0;
  double F_peak = 0;
  double k0 = 0;
  DecayLength source = DecayLength::OzWidth;
};

/// lambda(R) = e^{i k0 R} F_peak / (2 xi_c) e^{-R / xi_c}, R = 0..R_max
/// (R_max < 0 selects 10 xi_c capped at 1e4).
CorrelationSeries wannier_correlation(const CriticalLine& line, double theta1c, double k0, int R_max = -1,
                                      DecayLength source = DecayLength::OzWidth);

/// (1/2pi) int F(theta1c, k) e^{ikR} dk on a midpoint grid, skipping nodes
/// within 1e-6 of a gap closing.
std::complex<double> wannier_correlation_numeric(const CriticalLine& line, double theta1c, int R, int n_grid = 65536);

enum class Band { Plus, Minus };

/// v = -/+ d0' / sqrt(1 - d0^2) with sqrt(1 - d0^2) evaluated as |(d2, d3)|.
/// Throws GapClosingError when 1 - d0^2 <= 1e-14.
double group_velocity(const CoinAngles& a, double k, Band band = Band::Plus);

struct VelocityProfile {
  std::vector<double> k;
  std::vector<double> v;  // plus band; NaN at gap closings
  double v_min = 0;
  double v_max = 0;
  std::vector<double> discontinuities;
};

/// Midpoint grid of n_grid momenta; closings are reported as discontinuities.
VelocityProfile velocity_profile(const CoinAngles& a, int n_grid = 4096);

/// Largest deviation of v from a constant on each arc between closings.
double piecewise_constant_deviation(const VelocityProfile& p);

struct CriticalWinding {
  double w_c_raw = 0;       // Richardson value over (delta, delta/2, delta/4)
  double w_c_at_delta = 0;  // plain accumulation at delta
  int w_c = 0;
  bool half_integer = false;
  double delta = 0;
  std::vector<double> excluded;
};

/// Angle accumulation of (d2c, d3c) over the zone minus |k - k0| <= delta for
/// every gap-closing k0. Throws GappedInput in gapped sub-domains.
CriticalWinding critical_winding(const CriticalLine& line, double theta1c, double delta = 1e-2, int n_grid = 8192);

/// Accumulated winding at a single delta (no extrapolation).
double critical_winding_at(const CriticalLine& line, double theta1c, double delta, int n_grid,
                           const std::vector<GapClosing>& closings);

struct UnitVectorSample {
  double k = 0;
  double n2 = 0;
  double n3 = 0;
  bool segment_start = false;  // first sample after an excluded closing neighbourhood
};

/// Normalised (n2, n3) over the zone. The gapped trace repeats its first
/// sample at k + 2pi so that it is explicitly closed; on a line, closing
/// neighbourhoods of half-width delta are dropped and each arc starts a segment.
std::vector<UnitVectorSample> winding_vector_trace(const CoinAngles& a, int n_grid = 4096);
std::vector<UnitVectorSample> winding_vector_trace(const CriticalLine& line, double theta1c, int n_grid = 4096,
                                                   double delta = 1e-2);

/// |accumulated angle| / 2pi rounded to the nearest integer, summing
/// increments within segments only.
int count_loops(const std::vector<UnitVectorSample>& trace);

}  // namespace tsqw
