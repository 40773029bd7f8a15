#include "tsqw/walk_core.hpp"

#include <cmath>

#include "tsqw/errors.hpp"

namespace tsqw {

namespace {

using cd = std::complex<double>;

Matrix2c sigma1() {
  Matrix2c s;
  s << 0, 1, 1, 0;
  return s;
}

Matrix2c sigma2() {
  Matrix2c s;
  s << 0, cd(0, -1), cd(0, 1), 0;
  return s;
}

Matrix2c sigma3() {
  Matrix2c s;
  s << 1, 0, 0, -1;
  return s;
}

}  // namespace

double BlochVector::transverse() const { return std::hypot(d2, d3); }

MomentumTrig MomentumTrig::at(double k) {
  MomentumTrig t;
  t.c1 = std::cos(k);
  t.s1 = std::sin(k);
  t.c3 = t.c1 * (4.0 * t.c1 * t.c1 - 3.0);
  t.s3 = t.s1 * (3.0 - 4.0 * t.s1 * t.s1);
  return t;
}

BlochCoefficients BlochCoefficients::from(const CoinAngles& a) {
  const double c1 = std::cos(a.theta1), s1 = std::sin(a.theta1);
  const double c2 = std::cos(a.theta2), s2 = std::sin(a.theta2);
  const double c22 = c2 * c2, s22 = s2 * s2, sin2t2 = 2.0 * s2 * c2;
  BlochCoefficients b;
  b.p0 = -(c1 * s22 + s1 * sin2t2);
  b.q0 = c1 * c22;
  b.p2 = s1 * s22 - c1 * sin2t2;
  b.q2 = -s1 * c22;
  b.p3 = -s22;
  b.q3 = c22;
  return b;
}

BlochVector BlochCoefficients::dk(double k) const {
  const double s1 = std::sin(k), c1 = std::cos(k);
  const double s3 = std::sin(3.0 * k), c3 = std::cos(3.0 * k);
  return {-p0 * s1 - 3.0 * q0 * s3, 0.0, -p2 * s1 - 3.0 * q2 * s3, p3 * c1 + 3.0 * q3 * c3};
}

Matrix2r coin_matrix(double theta) {
  Matrix2r c;
  c << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return c;
}

Matrix2c shift_matrix(double k) {
  Matrix2c s = Matrix2c::Zero();
  s(0, 0) = std::polar(1.0, k);
  s(1, 1) = std::polar(1.0, -k);
  return s;
}

Matrix2c walk_unitary(const CoinAngles& a, double k) {
  const Matrix2c half = coin_matrix(0.5 * a.theta1).cast<cd>();
  const Matrix2c c2 = coin_matrix(a.theta2).cast<cd>();
  const Matrix2c s = shift_matrix(k);
  return half * s * c2 * s * c2 * s * half;
}

BlochVector pauli_decompose(const Matrix2c& u) {
  const cd i(0, 1);
  BlochVector d;
  d.d0 = (u.trace() / 2.0).real();
  d.d1 = ((u * sigma1()).trace() / 2.0).real();
  d.d2 = ((u * sigma2()).trace() / (2.0 * i)).real();
  d.d3 = ((u * sigma3()).trace() / (2.0 * i)).real();
  return d;
}

BlochVector bloch_vector(const CoinAngles& a, double k) { return BlochCoefficients::from(a).at(k); }

QuasiEnergy quasi_energy(const BlochVector& d) {
  if (std::abs(d.d0) > 1.0 + 1e-12) throw std::domain_error("quasi_energy: |d0| exceeds 1 beyond rounding");
  const double e = std::atan2(d.transverse(), d.d0);
  return {e, -e};
}

QuasiEnergy quasi_energy(const CoinAngles& a, double k) { return quasi_energy(bloch_vector(a, k)); }

double gap_at(const BlochVector& d) {
  const double e = std::abs(quasi_energy(d).e_plus);
  return std::min(e, kPi - e);
}

double gap_at(const CoinAngles& a, double k) { return gap_at(bloch_vector(a, k)); }

Matrix2c effective_hamiltonian(const CoinAngles& a, double k) {
  const BlochVector d = bloch_vector(a, k);
  const double norm = std::sqrt(d.d1 * d.d1 + d.d2 * d.d2 + d.d3 * d.d3);
  if (norm == 0) throw GapClosingError("effective_hamiltonian: n(k) undefined");
  const double e = quasi_energy(d).e_plus;
  return (e / norm) * (d.d1 * sigma1() + d.d2 * sigma2() + d.d3 * sigma3());
}

double chiral_check(const CoinAngles& a, double k) {
  if (gap_at(a, k) < 1e-9) throw GapClosingError("chiral_check: gap below 1e-9");
  const Matrix2c h = effective_hamiltonian(a, k);
  const Matrix2c s = sigma1();
  return (s * h * s + h).norm();
}

double alpha_expression(const CoinAngles& a, double k) {
  const double t1 = a.theta1, t2 = a.theta2;
  const double ct2 = std::cos(t2);
  return std::cos(3 * k) * std::cos(t1) * ct2 * ct2 -
         std::cos(k) * std::sin(t2) * (2 * ct2 * std::sin(t1) + std::cos(t1) * std::sin(t2));
}

std::array<double, 3> beta_terms(const CoinAngles& a, double k) {
  const double t1 = a.theta1, t2 = a.theta2;
  const double sk = std::sin(k), ct1 = std::cos(t1);
  const double b1 = (9 + 4 * std::cos(2 * k) + 3 * std::cos(4 * k)) * sk * sk * std::cos(2 * t1);
  const double b2 = 2 * std::cos(2 * k) * ct1 * ct1 * std::cos(2 * t2) + std::sin(2 * t1) * std::sin(2 * t2);
  const double b3 = 9 + 3 * std::cos(4 * k) +
                    (2 * std::cos(4 * k) * ct1 * ct1 - 5 * std::cos(2 * t1) - 1) * std::cos(4 * t2) +
                    4 * std::cos(2 * k) * (std::sin(2 * t1) * std::sin(4 * t2) - 2);
  return {b1, b2, b3};
}

double BetaFormCheck::mismatch() const { return std::abs(radicand_beta - radicand_expected); }

BetaFormCheck beta_form_check(const CoinAngles& a, double k) {
  const auto [b1, b2, b3] = beta_terms(a, k);
  const double s2k = std::sin(2 * k), ck = std::cos(k);
  BetaFormCheck c;
  c.alpha = alpha_expression(a, k);
  c.radicand_beta = (-2 * b1 - 8 * s2k * s2k * b2 + 2 * ck * ck * b3) / 16.0;
  c.radicand_expected = -(1 - c.alpha * c.alpha);
  return c;
}

}  // namespace tsqw
