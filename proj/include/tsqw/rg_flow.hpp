#pragma once

#include <vector>

#include "tsqw/phase_topology.hpp"

namespace tsqw {

struct FlowCoefficients {
  double kappa1 = 0;  // sin t
  double kappa2 = 0;  // cos t
  double kappa3 = 0;  // sin 2t
  double kappa_r = 0; // cos 2t
  double kappa_b = 0; // 4 cos t - cos 2t

  static FlowCoefficients at(double theta1c);
};

/// Representative line used for family-level flows: red2, blue1, op1.
const CriticalLine& family_line(LineFamily f);

/// 1/2 d^2F/dk^2 / dF/dtheta at k0 by Richardson-refined central differences.
/// Returns +inf when F itself diverges at (theta1c, k0); throws
/// std::domain_error when dF/dtheta vanishes within 1e-12.
double rg_rhs_numeric(const CriticalLine& line, double theta1c, double k0 = 0.0, double h_k = 1e-3,
                      double h_theta = 1e-5);

/// Closed-form flow in the same normalisation as rg_rhs_numeric.
/// red:  (3k1 - k1/(1+2k2) - 2k1/(2+kr) + k3) / 2
/// blue: the red flow shifted by pi
/// orange-purple: k2/k1 (throws std::domain_error at k1 = 0)
double rg_rhs_closed(LineFamily family, double theta1c);

enum class FlowTerminal { FixedPoint, Diverged, MaxSteps };

struct RGTrajectory {
  std::vector<double> theta;
  double dl = 0;
  FlowTerminal terminal = FlowTerminal::MaxSteps;
  double terminal_theta = 0;
};

/// theta <- theta + clamp(rhs dl, +-1e-2). A sign change of rhs between two
/// iterates is bisected and ends the trajectory at the zero or the pole.
RGTrajectory integrate_flow(LineFamily family, double theta1_start, double dl = 1e-2, int max_steps = 100000);

struct FlowPoint {
  double theta = 0;
  bool attractive = false;
};

struct FlowPoints {
  std::vector<FlowPoint> fixed;
  std::vector<double> unstable;
};

enum class FlowSource { Closed, Numeric };

FlowPoints classify_flow_points(LineFamily family, int resolution = 4000, FlowSource src = FlowSource::Closed,
                                Execution ex = Execution::Parallel);

/// True when theta lies within `radius` of a zero or pole of the family flow.
bool near_flow_singularity(LineFamily family, double theta, double radius);

}  // namespace tsqw
