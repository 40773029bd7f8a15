#include "tsqw/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsqw {

double wrap_angle(double a) {
  if (a >= -kPi && a <= kPi) return a;
  return std::remainder(a, kTwoPi);
}

double canonical_momentum(double k) {
  double w = wrap_angle(k);
  return w <= -kPi ? kPi : w;
}

double circular_diff(double a, double b) { return std::remainder(a - b, kTwoPi); }

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  auto e = linspace(std::log(a), std::log(b), n);
  for (auto& v : e) v = std::exp(v);
  return e;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw std::invalid_argument("linear_fit: need >= 3 paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - f.intercept - f.slope * x[i];
    sse += r * r;
  }
  f.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  double s2 = sse / static_cast<double>(n - 2);
  f.slope_err = std::sqrt(s2 / sxx);
  double sx2 = 0;
  for (std::size_t i = 0; i < n; ++i) sx2 += x[i] * x[i];
  f.intercept_err = std::sqrt(s2 * sx2 / (n * sxx));
  return f;
}

LeastSquares least_squares(const std::vector<std::vector<double>>& columns,
                           std::span<const double> y) {
  const auto n = static_cast<Eigen::Index>(y.size());
  const auto p = static_cast<Eigen::Index>(columns.size());
  if (n <= p) throw std::invalid_argument("least_squares: underdetermined");
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Y(i) = y[i];
    for (Eigen::Index j = 0; j < p; ++j) X(i, j) = columns[j].at(i);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  Eigen::VectorXd beta = qr.solve(Y);
  Eigen::VectorXd res = Y - X * beta;
  double sse = res.squaredNorm();
  double s2 = sse / static_cast<double>(n - p);
  Eigen::MatrixXd cov = (X.transpose() * X).inverse() * s2;
  double syy = (Y.array() - Y.mean()).square().sum();

  LeastSquares out;
  out.beta.assign(beta.data(), beta.data() + p);
  out.std_errors.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) out.std_errors[j] = std::sqrt(std::max(0.0, cov(j, j)));
  out.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  return out;
}

double bisect_sign(const std::function<double(double)>& f, double a, double b, double tol,
                   int max_iter) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (std::signbit(fa) == std::signbit(fb)) throw std::invalid_argument("bisect_sign: no sign change");
  for (int i = 0; i < max_iter && std::abs(b - a) > tol; ++i) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace tsqw
