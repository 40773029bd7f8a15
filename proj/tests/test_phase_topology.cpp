#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "tsqw/errors.hpp"
#include "tsqw/phase_topology.hpp"

using namespace tsqw;

TEST_SUITE("phase_topology") {
  TEST_CASE("winding number matches a 1e6-point accumulation") {
    const WindingResult a = winding_number({kPi / 2, kPi / 2});
    CHECK(a.w == -1);
    CHECK(a.w == std::lround(oracle::winding(kPi / 2, kPi / 2, 1000000)));
    const WindingResult b = winding_number({0.7, -0.3});
    CHECK(b.w == -3);
    CHECK(std::abs(oracle::winding(0.7, -0.3, 1000000) - b.w_raw) < 1e-6);
  }

  TEST_CASE("random gapped points: library winding equals the oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    int n = 0;
    while (n < 40) {
      const CoinAngles a{u(rng), u(rng)};
      if (min_gap(a) < 0.05) continue;
      const WindingResult w = winding_number(a);
      const double o = oracle::winding(a.theta1, a.theta2, 200000);
      CHECK(w.w == std::lround(o));
      CHECK(std::abs(w.w_raw - w.w) < 1e-3);
      CHECK((w.w == -3 || w.w == -1 || w.w == 1 || w.w == 3));
      ++n;
    }
  }

  TEST_CASE("winding_number refuses gapless input") {
    const CriticalLine& red2 = critical_line(LineId::Red2);
    CHECK_THROWS_AS(winding_number(red2.at(0.3)), GaplessInput);
  }

  TEST_CASE("eight lines; gapless where stated, gapped inside the listed intervals") {
    REQUIRE(critical_lines().size() == 8);
    for (const auto& l : critical_lines()) {
      CHECK(parse_line(line_name(l.id)) == l.id);
      for (int j = 1; j < 40; ++j) {
        const double t = l.theta1_domain.lo + (l.theta1_domain.hi - l.theta1_domain.lo) * j / 40.0;
        // brute-force gap minimum on 20000 momenta
        double g = 10;
        for (int i = 0; i < 20000; ++i) {
          const oracle::D d = oracle::decompose(oracle::unitary(t, l.theta2_at(t), -kPi + kTwoPi * (i + 0.5) / 20000));
          g = std::min(g, std::hypot(d.d2, d.d3));
        }
        if (l.gapless_at(t))
          CHECK(g < 1e-3);
        else
          CHECK(g > 1e-3);
      }
    }
    CHECK(!critical_line(LineId::Op1).gapped.empty());
    CHECK(critical_line(LineId::Red2).gapped.empty());
    CHECK_FALSE(parse_line("red4").has_value());
  }

  TEST_CASE("multicritical catalog equals brute-force pairwise intersections") {
    std::vector<CoinAngles> brute;
    const auto& L = critical_lines();
    for (std::size_t a = 0; a < L.size(); ++a)
      for (std::size_t b = a + 1; b < L.size(); ++b) {
        if (L[a].slope == L[b].slope) continue;
        const double t = (L[b].intercept - L[a].intercept) / (L[a].slope - L[b].slope);
        if (!L[a].in_domain(t) || !L[b].in_domain(t)) continue;
        bool dup = false;
        for (const auto& q : brute) dup = dup || (std::abs(q.theta1 - t) < 1e-12 && std::abs(q.theta2 - L[a].theta2_at(t)) < 1e-12);
        if (!dup) brute.push_back({t, L[a].theta2_at(t)});
      }
    const auto& mcs = multicritical_points();
    REQUIRE(mcs.size() == 13);
    CHECK(brute.size() == 13);
    int q = 0;
    for (const auto& m : mcs) {
      q += m.kind == Dispersion::Quadratic;
      bool found = false;
      for (const auto& b : brute) found = found || (std::abs(b.theta1 - m.angles.theta1) < 1e-12 && std::abs(b.theta2 - m.angles.theta2) < 1e-12);
      CHECK(found);
    }
    CHECK(q == 8);
    const auto zero = find_multicritical(LineId::Red2, 0.0);
    REQUIRE(zero.has_value());
    CHECK(zero->kind == Dispersion::Linear);
    CHECK_FALSE(find_multicritical(LineId::Red2, 0.5).has_value());
  }

  TEST_CASE("gap-closing momenta match a 1e6-point k-scan at every multicritical point") {
    for (const auto& m : multicritical_points()) {
      auto scan = oracle::closing_scan(m.angles.theta1, m.angles.theta2, 1000000, 1e-4);
      REQUIRE(scan.size() == m.closings.size());
      for (const auto& g : m.closings) {
        bool hit = false;
        for (double k : scan) hit = hit || std::abs(std::remainder(k - g.k, kTwoPi)) < 2e-5;
        CHECK(hit);
        CHECK(g.high_symmetry == (std::abs(std::sin(g.k)) < 1e-9));
      }
      if (m.kind == Dispersion::Quadratic) {
        CHECK(m.closings.size() == 2);
      } else {
        CHECK(m.closings.size() == 6);  // 0, +-pi/3, +-2pi/3, pi
      }
    }
  }

  TEST_CASE("closings on a generic line point") {
    const auto red = gap_closing_momenta(critical_line(LineId::Red2), 1.0);
    REQUIRE(red.size() == 2);
    for (const auto& g : red) CHECK(g.high_symmetry);
    const auto op = gap_closing_momenta(critical_line(LineId::Op1), -1.0);
    REQUIRE(!op.empty());
    for (const auto& g : op) CHECK_FALSE(g.high_symmetry);
    CHECK_THROWS_AS(gap_closing_momenta(critical_line(LineId::Red1), -1.0), std::invalid_argument);
  }

  TEST_CASE("dynamical exponent: z = 2 at quadratic and 1 at linear points") {
    for (const auto& m : multicritical_points()) {
      const DynamicalExponent z = dynamical_exponent(m);
      CHECK(z.r_squared > 0.99);
      CHECK(z.z == doctest::Approx(m.kind == Dispersion::Quadratic ? 2.0 : 1.0).epsilon(0.05));
    }
  }

  TEST_CASE("phase diagram: parallel, serial and reference kernels agree") {
    const PhaseDiagram p = phase_diagram(64, 512, Execution::Parallel);
    const PhaseDiagram s = phase_diagram(64, 512, Execution::Serial);
    const PhaseDiagram r = phase_diagram_reference(64, 512);
    REQUIRE(p.cells.size() == 64u * 64u);
    for (std::size_t i = 0; i < p.cells.size(); ++i) {
      CHECK(p.cells[i].w == s.cells[i].w);
      CHECK(p.cells[i].min_gap == s.cells[i].min_gap);
      CHECK(p.cells[i].w_raw == s.cells[i].w_raw);
      CHECK(p.cells[i].gapless == r.cells[i].gapless);
      CHECK(p.cells[i].w == r.cells[i].w);
      CHECK(std::abs(p.cells[i].min_gap - r.cells[i].min_gap) < 1e-12);
    }
    CHECK_THROWS_AS(phase_diagram(32, 512), std::invalid_argument);
  }

  TEST_CASE("coarse and fine diagrams agree on common gapped cells") {
    const PhaseDiagram c = phase_diagram(65, 1024);
    const PhaseDiagram f = phase_diagram(257, 1024);
    int common = 0;
    for (int i = 0; i < 65; ++i)
      for (int j = 0; j < 65; ++j) {
        const PhaseCell& a = c.at(i, j);
        const PhaseCell& b = f.at(4 * i, 4 * j);
        REQUIRE(a.theta1 == doctest::Approx(b.theta1));
        if (a.gapless || b.gapless) continue;
        CHECK(a.w == b.w);
        ++common;
      }
    CHECK(common > 3500);
  }

  TEST_CASE("chebyshev distance to a segment") {
    const CriticalLine& l = critical_line(LineId::Op1);
    const double t = 0.2;
    CHECK(l.chebyshev_distance(t, l.theta2_at(t)) == doctest::Approx(0.0).epsilon(1e-14));
    // slope 1: a vertical offset d is at Chebyshev distance d / 2
    CHECK(l.chebyshev_distance(t, l.theta2_at(t) + 0.2) == doctest::Approx(0.1));
  }
}
