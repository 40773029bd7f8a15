#include <doctest.h>

#include "tsqw/errors.hpp"
#include "tsqw/observables.hpp"

using namespace tsqw;

TEST_SUITE("observables") {
  TEST_CASE("group velocity is the k-derivative of the quasi-energy") {
    for (const CoinAngles a : {CoinAngles{0.3, 1.1}, CoinAngles{-2.0, 0.4}, CoinAngles{kPi / 2, kPi / 2}})
      for (double k : {-2.7, -1.0, 0.2, 1.6, 2.5}) {
        const double h = 1e-6;
        const double fd = (quasi_energy(a, k + h).e_plus - quasi_energy(a, k - h).e_plus) / (2 * h);
        CHECK(group_velocity(a, k) == doctest::Approx(fd).epsilon(1e-6));
      }
  }

  TEST_CASE("velocity spans at multicritical points") {
    for (const auto& m : multicritical_points()) {
      const VelocityProfile p = velocity_profile(m.angles, 8192);
      const double span = m.kind == Dispersion::Linear ? 3.0 : 1.5;
      CHECK(p.v_min == doctest::Approx(-span).epsilon(1e-3));
      CHECK(p.v_max == doctest::Approx(span).epsilon(1e-3));
      CHECK(p.discontinuities.size() >= 1);
    }
    CHECK_THROWS_AS(velocity_profile({0, 0}, 512), std::invalid_argument);
  }

  TEST_CASE("velocity vanishes linearly at quadratic closings") {
    const MulticriticalPoint m = *find_multicritical(LineId::Red2, 2 * kPi / 3);
    for (const auto& g : m.closings) {
      const double a = group_velocity(m.angles, g.k + 1e-2);
      const double b = group_velocity(m.angles, g.k + 1e-3);
      CHECK(std::abs(b) < 2e-3);
      CHECK(a / b == doctest::Approx(10).epsilon(0.02));
    }
    CHECK_THROWS_AS(group_velocity(m.angles, m.closings.front().k), GapClosingError);
  }

  TEST_CASE("piecewise-constant velocity at flow fixed points") {
    for (const auto& l : critical_lines())
      for (double t : {-kPi, -kPi / 2, 0.0, kPi / 2, kPi}) {
        if (!l.gapless_at(t)) continue;
        CHECK(piecewise_constant_deviation(velocity_profile(l.at(t))) < 1e-6);
      }
    // away from fixed points v varies
    CHECK(piecewise_constant_deviation(velocity_profile(critical_line(LineId::Red2).at(1.0))) > 1e-2);
  }

  TEST_CASE("closed-form Wannier correlations match the numeric transform") {
    const CriticalLine& l = critical_line(LineId::Red2);
    const double t = 2 * kPi / 3 - 1e-2;
    const CorrelationSeries a = wannier_correlation(l, t, 0.0);
    const CorrelationSeries b = wannier_correlation(l, t, kPi, static_cast<int>(a.R.size()) - 1);
    CHECK(a.xi_c > 40);
    for (int R = static_cast<int>(std::ceil(a.xi_c / 2)); R <= 3 * a.xi_c; R += 7) {
      const auto num = wannier_correlation_numeric(l, t, R, 32768);
      const auto cl = a.lambda[R] + b.lambda[R];
      if (R % 2 == 0)
        CHECK(std::abs(num - cl) / std::abs(cl) < 0.1);
      else
        CHECK(std::abs(num) < 1e-6);
    }
  }

  TEST_CASE("decay lengths: slower decay closer to a quadratic point") {
    const CriticalLine& l = critical_line(LineId::Blue1);
    const double tm = kPi / 3;
    const double x1 = wannier_correlation(l, tm + 0.1, 0.0, 0).xi_c;
    const double x3 = wannier_correlation(l, tm + 0.3, 0.0, 0).xi_c;
    CHECK(x1 > x3);
    CHECK_THROWS_AS(wannier_correlation(critical_line(LineId::Op1), 0.1, 0.0, 5, DecayLength::PeakHeight),
                    std::invalid_argument);
    const auto s = wannier_correlation(critical_line(LineId::Red2), 0.1, 0.0, 5, DecayLength::PeakHeight);
    CHECK(s.xi_c == doctest::Approx(std::abs(curvature_function(critical_line(LineId::Red2), 0.1, 0.0))));
    CHECK(s.R.size() == 6);
  }

  TEST_CASE("gapless winding on the three families") {
    const CriticalLine& red = critical_line(LineId::Red2);
    CHECK(critical_winding(red, -2.5).w_c == 0);
    CHECK(critical_winding(red, -1.0).w_c == 2);
    CHECK(critical_winding(red, 1.0).w_c == -2);
    CHECK(critical_winding(red, 2.5).w_c == 0);
    const CriticalLine& blue = critical_line(LineId::Blue1);
    CHECK(critical_winding(blue, -2.0).w_c == 2);
    CHECK(critical_winding(blue, 0.0).w_c == 0);
    CHECK(critical_winding(blue, 2.0).w_c == -2);
    const CriticalLine& op = critical_line(LineId::Op1);
    CHECK(critical_winding(op, -0.5).w_c == 1);
    CHECK(critical_winding(op, 0.5).w_c == -1);
    const Interval g = op.gapped.front();
    CHECK_THROWS_AS(critical_winding(op, 0.5 * (g.lo + g.hi)), GappedInput);
    // stability of the extrapolated value under halving delta
    const CriticalWinding a = critical_winding(red, 1.0, 1e-2), b = critical_winding(red, 1.0, 5e-3);
    CHECK(std::abs(a.w_c_raw - b.w_c_raw) < 1e-2);
    CHECK_FALSE(a.half_integer);
  }

  TEST_CASE("winding vector traces") {
    const auto tr = winding_vector_trace(CoinAngles{0.7, -0.3});
    REQUIRE(tr.size() > 1);
    CHECK(tr.front().n2 == doctest::Approx(tr.back().n2));
    CHECK(tr.front().n3 == doctest::Approx(tr.back().n3));
    CHECK(count_loops(tr) == 3);
    for (const auto& s : tr) CHECK(s.n2 * s.n2 + s.n3 * s.n3 == doctest::Approx(1.0).epsilon(1e-12));
    const auto lt = winding_vector_trace(critical_line(LineId::Red2), 1.0);
    CHECK(count_loops(lt) == 2);
    int segs = 0;
    for (const auto& s : lt) segs += s.segment_start;
    CHECK(segs == 2);
  }
}
