#pragma once

#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace tsqw {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps into [-pi, pi]. Idempotent.
double wrap_angle(double a);

/// Wraps into (-pi, pi]; the Brillouin-zone edge is reported as +pi.
double canonical_momentum(double k);

/// Shortest signed distance a - b on the circle.
double circular_diff(double a, double b);

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double slope_err = 0;
  double intercept_err = 0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Ordinary least squares y ~ X beta; returns beta and standard errors.
struct LeastSquares {
  std::vector<double> beta;
  std::vector<double> std_errors;
  double r_squared = 0;
};

LeastSquares least_squares(const std::vector<std::vector<double>>& columns,
                           std::span<const double> y);

/// Bisection on a sign change of f over [a, b]. f(a), f(b) must differ in sign.
double bisect_sign(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-13, int max_iter = 200);

/// Golden-section maximisation of f on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-12);

}  // namespace tsqw
