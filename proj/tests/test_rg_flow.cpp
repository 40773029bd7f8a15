#include <doctest.h>

#include "tsqw/rg_flow.hpp"

using namespace tsqw;

namespace {

double closed_slope(LineFamily f, double t) {
  const double h = 1e-6;
  return (rg_rhs_closed(f, t + h) - rg_rhs_closed(f, t - h)) / (2 * h);
}

}  // namespace

TEST_SUITE("rg_flow") {
  TEST_CASE("numeric right-hand side tracks the closed form") {
    for (LineFamily f : {LineFamily::RedHS, LineFamily::BlueHS, LineFamily::OrangePurpleNHS})
      for (double t : {-2.8, -1.9, -1.2, -0.4, 0.25, 0.9, 1.3, 2.4, 2.9}) {
        if (near_flow_singularity(f, t, 1e-2)) continue;
        CHECK(rg_rhs_numeric(family_line(f), t) == doctest::Approx(rg_rhs_closed(f, t)).epsilon(1e-4));
      }
  }

  TEST_CASE("orange-purple flow is cot(theta)") {
    for (double t : {-2.0, -0.7, 0.3, 1.4}) CHECK(rg_rhs_closed(LineFamily::OrangePurpleNHS, t) == doctest::Approx(1 / std::tan(t)));
    CHECK_THROWS_AS(rg_rhs_closed(LineFamily::OrangePurpleNHS, 0.0), std::domain_error);
  }

  TEST_CASE("fixed and unstable points with stability from the rhs slope") {
    struct Expect {
      LineFamily f;
      std::vector<double> fixed;
      std::vector<double> unstable;
    };
    const std::vector<Expect> ex{{LineFamily::RedHS, {-kPi / 2, 0, kPi / 2, kPi}, {-2 * kPi / 3, 2 * kPi / 3}},
                                 {LineFamily::BlueHS, {-kPi / 2, 0, kPi / 2, kPi}, {-kPi / 3, kPi / 3}},
                                 {LineFamily::OrangePurpleNHS, {-kPi / 2, kPi / 2}, {0, kPi}}};
    for (const auto& e : ex) {
      const FlowPoints fp = classify_flow_points(e.f);
      REQUIRE(fp.fixed.size() == e.fixed.size());
      REQUIRE(fp.unstable.size() == e.unstable.size());
      for (std::size_t i = 0; i < e.fixed.size(); ++i) {
        CHECK(std::abs(circular_diff(fp.fixed[i].theta, e.fixed[i])) < 1e-6);
        // attractive iff the rhs decreases through the zero
        CHECK(fp.fixed[i].attractive == (closed_slope(e.f, e.fixed[i]) < 0));
      }
      std::vector<double> u = fp.unstable;
      for (std::size_t i = 0; i < e.unstable.size(); ++i) CHECK(std::abs(circular_diff(u[i], e.unstable[i])) < 1e-6);
    }
    const FlowPoints red = classify_flow_points(LineFamily::RedHS);
    CHECK(red.fixed[1].attractive == false);  // theta = 0
    CHECK(red.fixed[3].attractive == true);   // theta = pi
    const FlowPoints blue = classify_flow_points(LineFamily::BlueHS);
    CHECK(blue.fixed[1].attractive == true);
    CHECK(blue.fixed[3].attractive == false);
  }

  TEST_CASE("serial and parallel classification agree") {
    const FlowPoints a = classify_flow_points(LineFamily::RedHS, 3000, FlowSource::Closed, Execution::Serial);
    const FlowPoints b = classify_flow_points(LineFamily::RedHS, 3000, FlowSource::Closed, Execution::Parallel);
    REQUIRE(a.fixed.size() == b.fixed.size());
    for (std::size_t i = 0; i < a.fixed.size(); ++i) CHECK(a.fixed[i].theta == b.fixed[i].theta);
    CHECK(a.unstable == b.unstable);
    CHECK_THROWS_AS(classify_flow_points(LineFamily::RedHS, 500), std::invalid_argument);
  }

  TEST_CASE("flow trajectories end at attractive fixed points") {
    // stepping stops at |rhs| < 1e-6, i.e. within about 1e-6 / |rhs'| of the zero
    const RGTrajectory a = integrate_flow(LineFamily::RedHS, 0.3);
    CHECK(a.terminal == FlowTerminal::FixedPoint);
    CHECK(a.terminal_theta == doctest::Approx(kPi / 2).epsilon(1e-5));
    const RGTrajectory b = integrate_flow(LineFamily::RedHS, 2 * kPi / 3 - 1e-2);
    CHECK(b.terminal == FlowTerminal::FixedPoint);
    CHECK(b.terminal_theta == doctest::Approx(kPi / 2).epsilon(1e-5));
    const RGTrajectory c = integrate_flow(LineFamily::RedHS, 2 * kPi / 3 + 1e-2);
    CHECK(c.terminal == FlowTerminal::FixedPoint);
    CHECK(std::abs(std::abs(c.terminal_theta) - kPi) < 1e-5);
    const RGTrajectory d = integrate_flow(LineFamily::RedHS, -0.3);
    CHECK(d.terminal_theta == doctest::Approx(-kPi / 2).epsilon(1e-5));
    const RGTrajectory e = integrate_flow(LineFamily::RedHS, 2 * kPi / 3 + 1e-9);
    CHECK(e.terminal == FlowTerminal::Diverged);
    // monotone approach: theta moves in one direction only
    for (std::size_t i = 1; i < a.theta.size(); ++i) CHECK(a.theta[i] >= a.theta[i - 1]);
  }

  TEST_CASE("orange-purple flow is regular at the quadratic angles") {
    for (double t : {-2 * kPi / 3, -kPi / 3, kPi / 3, 2 * kPi / 3}) {
      CHECK(std::isfinite(rg_rhs_closed(LineFamily::OrangePurpleNHS, t)));
      CHECK_FALSE(near_flow_singularity(LineFamily::OrangePurpleNHS, t, 0.1));
    }
  }

  TEST_CASE("integrate_flow validates the step") {
    CHECK_THROWS_AS(integrate_flow(LineFamily::RedHS, 0.3, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(integrate_flow(LineFamily::RedHS, 0.3, 0.0), std::invalid_argument);
  }
}
