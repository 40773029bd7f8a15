#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>

#include "tsqw/numerics.hpp"

namespace tsqw {

using Matrix2c = Eigen::Matrix2cd;
using Matrix2r = Eigen::Matrix2d;

struct CoinAngles {
  double theta1 = 0;
  double theta2 = 0;

  [[nodiscard]] CoinAngles normalized() const { return {wrap_angle(theta1), wrap_angle(theta2)}; }
};

struct BlochVector {
  double d0 = 0;
  double d1 = 0;
  double d2 = 0;
  double d3 = 0;

  /// |(d2, d3)|, the magnitude that vanishes at a gap closing.
  [[nodiscard]] double transverse() const;
};

/// cos/sin of k and 3k, shared by every (theta1, theta2) at the same momentum.
struct MomentumTrig {
  double c1 = 1, s1 = 0, c3 = 1, s3 = 0;

  static MomentumTrig at(double k);
};

/// The Bloch components are trigonometric polynomials in k:
///   d0 = p0 cos k + q0 cos 3k,  d2 = p2 cos k + q2 cos 3k,  d3 = p3 sin k + q3 sin 3k.
struct BlochCoefficients {
  double p0 = 0, q0 = 0;
  double p2 = 0, q2 = 0;
  double p3 = 0, q3 = 0;

  static BlochCoefficients from(const CoinAngles& a);

  [[nodiscard]] BlochVector at(double k) const { return at(MomentumTrig::at(k)); }
  [[nodiscard]] BlochVector at(const MomentumTrig& t) const {
    return {p0 * t.c1 + q0 * t.c3, 0.0, p2 * t.c1 + q2 * t.c3, p3 * t.s1 + q3 * t.s3};
  }
  /// Analytic k-derivative of every component.
  [[nodiscard]] BlochVector dk(double k) const;
};

struct QuasiEnergy {
  double e_plus = 0;
  double e_minus = 0;
};

Matrix2r coin_matrix(double theta);
Matrix2c shift_matrix(double k);
Matrix2c walk_unitary(const CoinAngles& a, double k);

/// Pauli decomposition U = d0 I + d1 sigma1 + i d2 sigma2 + i d3 sigma3 (real parts).
BlochVector pauli_decompose(const Matrix2c& u);

BlochVector bloch_vector(const CoinAngles& a, double k);

/// Quasi-energy from d0 via atan2(|d_perp|, d0); throws if |d0| > 1 + 1e-12.
QuasiEnergy quasi_energy(const BlochVector& d);
QuasiEnergy quasi_energy(const CoinAngles& a, double k);

/// min(|E|, pi - |E|).
double gap_at(const BlochVector& d);
double gap_at(const CoinAngles& a, double k);

/// H(k) = E n.sigma on the + band branch.
Matrix2c effective_hamiltonian(const CoinAngles& a, double k);

/// ||sigma1 H sigma1 + H||_F. Throws GapClosingError when the gap is below 1e-9.
double chiral_check(const CoinAngles& a, double k);

/// Closed-form alpha (real part of the eigenvalue), identical to d0.
double alpha_expression(const CoinAngles& a, double k);

/// beta_1, beta_2, beta_3 of the beta-form eigenvalue expression.
std::array<double, 3> beta_terms(const CoinAngles& a, double k);

struct BetaFormCheck {
  double alpha = 0;
  double radicand_beta = 0;      // (-2 b1 - 8 sin^2 2k b2 + 2 cos^2 k b3) / 16
  double radicand_expected = 0;  // -(1 - alpha^2)
  [[nodiscard]] double mismatch() const;
};

BetaFormCheck beta_form_check(const CoinAngles& a, double k);

}  // namespace tsqw
