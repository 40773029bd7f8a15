#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "tsqw/errors.hpp"
#include "tsqw/observables.hpp"
#include "tsqw/walk_core.hpp"

using namespace tsqw;

TEST_SUITE("walk_core") {
  TEST_CASE("Bloch coefficients match the hand-multiplied unitary") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 4000; ++i) {
      const double t1 = u(rng), t2 = u(rng), k = u(rng);
      const oracle::D o = oracle::decompose(oracle::unitary(t1, t2, k));
      const BlochVector d = bloch_vector({t1, t2}, k);
      CHECK(std::abs(o.d0 - d.d0) < 1e-12);
      CHECK(std::abs(o.d2 - d.d2) < 1e-12);
      CHECK(std::abs(o.d3 - d.d3) < 1e-12);
      CHECK(std::abs(o.d1) < 1e-12);
      CHECK(std::max({std::abs(o.i0), std::abs(o.i1), std::abs(o.i2), std::abs(o.i3)}) < 1e-12);
    }
  }

  TEST_CASE("Eigen-based product and decomposition agree with the oracle") {
    const CoinAngles a{0.4, -1.3};
    for (double k : {-2.0, -0.5, 0.0, 0.9, 3.1}) {
      const BlochVector m = pauli_decompose(walk_unitary(a, k));
      const oracle::D o = oracle::decompose(oracle::unitary(a.theta1, a.theta2, k));
      CHECK(std::abs(m.d0 - o.d0) < 1e-13);
      CHECK(std::abs(m.d2 - o.d2) < 1e-13);
      CHECK(std::abs(m.d3 - o.d3) < 1e-13);
    }
  }

  TEST_CASE("sum rule holds to 1e-12") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 10000; ++i) {
      const BlochVector d = bloch_vector({u(rng), u(rng)}, u(rng));
      REQUIRE(std::abs(d.d0 * d.d0 + d.d2 * d.d2 + d.d3 * d.d3 - 1) < 1e-12);
    }
  }

  TEST_CASE("quasi-energies equal the eigenphases of the unitary") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 500; ++i) {
      const CoinAngles a{u(rng), u(rng)};
      const double k = u(rng);
      Eigen::ComplexEigenSolver<Matrix2c> es(walk_unitary(a, k));
      std::array<double, 2> ph{std::arg(es.eigenvalues()(0)), std::arg(es.eigenvalues()(1))};
      std::sort(ph.begin(), ph.end());
      const QuasiEnergy q = quasi_energy(a, k);
      // eigenvalues e^{-iE}: phases are -E+ and -E-
      std::array<double, 2> e{-q.e_plus, -q.e_minus};
      std::sort(e.begin(), e.end());
      CHECK(std::abs(ph[0] - e[0]) < 1e-9);
      CHECK(std::abs(ph[1] - e[1]) < 1e-9);
      CHECK(q.e_plus == doctest::Approx(-q.e_minus));
    }
  }

  TEST_CASE("quasi_energy rejects |d0| beyond one") {
    BlochVector d;
    d.d0 = 1.0 + 1e-9;
    CHECK_THROWS_AS(quasi_energy(d), std::domain_error);
    d.d0 = 1.0 + 1e-13;
    CHECK_NOTHROW(quasi_energy(d));
  }

  TEST_CASE("chiral symmetry: sigma1 U sigma1 equals U^dagger and H anticommutes") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    Matrix2c s1;
    s1 << 0, 1, 1, 0;
    int n = 0;
    for (int i = 0; i < 2000 && n < 1000; ++i) {
      const CoinAngles a{u(rng), u(rng)};
      const double k = u(rng);
      const Matrix2c U = walk_unitary(a, k);
      CHECK((s1 * U * s1 - U.adjoint()).norm() < 1e-12);
      if (gap_at(a, k) < 1e-6) continue;
      CHECK(chiral_check(a, k) < 1e-10);
      ++n;
    }
    CHECK(n >= 900);
  }

  TEST_CASE("chiral_check refuses a closing") {
    CHECK_THROWS_AS(chiral_check({0, 0}, 0.0), GapClosingError);
  }

  TEST_CASE("alpha expression is d0") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 2000; ++i) {
      const CoinAngles a{u(rng), u(rng)};
      const double k = u(rng);
      CHECK(std::abs(alpha_expression(a, k) - bloch_vector(a, k).d0) < 1e-12);
    }
  }

  TEST_CASE("beta form check reports consistent pieces") {
    const BetaFormCheck b = beta_form_check({0.3, 0.8}, 1.1);
    CHECK(b.alpha == doctest::Approx(bloch_vector({0.3, 0.8}, 1.1).d0).epsilon(1e-12));
    CHECK(b.radicand_expected == doctest::Approx(-(1 - b.alpha * b.alpha)).epsilon(1e-12));
    CHECK(std::isfinite(b.mismatch()));
  }

  TEST_CASE("analytic k-derivative matches finite differences") {
    const BlochCoefficients c = BlochCoefficients::from({1.2, -0.4});
    for (double k : {-2.5, -0.3, 0.7, 2.9}) {
      const double h = 1e-6;
      const BlochVector p = c.at(k + h), m = c.at(k - h), d = c.dk(k);
      CHECK(d.d0 == doctest::Approx((p.d0 - m.d0) / (2 * h)).epsilon(1e-7));
      CHECK(d.d2 == doctest::Approx((p.d2 - m.d2) / (2 * h)).epsilon(1e-7));
      CHECK(d.d3 == doctest::Approx((p.d3 - m.d3) / (2 * h)).epsilon(1e-7));
    }
  }

  TEST_CASE("group velocity bands are antisymmetric") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 1000; ++i) {
      const CoinAngles a{u(rng), u(rng)};
      const double k = u(rng);
      if (gap_at(a, k) < 1e-4) continue;
      CHECK(group_velocity(a, k, Band::Minus) == -group_velocity(a, k, Band::Plus));
    }
  }
}
