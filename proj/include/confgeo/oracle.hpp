#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "confgeo/jet.hpp"

namespace confgeo {

/// Right-hand side f(x, state) -> y''' for a state (y, p, q) of length 3m.
using ThirdOrderRhs = std::function<void(double x, const std::vector<double>& state, std::vector<double>& out)>;

ThirdOrderRhs numeric_rhs(const OdeSystem& sys);

struct IntegrationOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  /// Abort if any state component exceeds this magnitude.
  double blowup = 1e6;
};

/// Samples of a trajectory on a uniform grid x0, x0 + h, ..., x0 + length.
struct Trajectory {
  std::vector<double> x;
  std::vector<std::vector<double>> state;  // (y, p, q) per sample
};

/// Adaptive Dormand-Prince 5(4) integration of y''' = f, stepping exactly
/// onto each grid point. Nullopt if the solution blows up, hits a pole or
/// the step size underflows; `reason` then says why.
std::optional<Trajectory> integrate(const ThirdOrderRhs& f, int m, double x0, std::vector<double> state0,
                                    double length, int intervals, const IntegrationOptions& options = {},
                                    std::string* reason = nullptr);

struct TrajectoryResult {
  std::vector<double> initial;  // x0, y, p, q
  bool skipped = false;
  std::string reason;
  double curvature_mean = 0;
  double curvature_deviation = 0;  // max |kappa - mean|
  double max_torsion = 0;
  bool passed = false;
};

struct OracleReport {
  bool passed = false;
  double tolerance = 0;
  std::vector<TrajectoryResult> trajectories;
  int completed() const;
};

/// Integrates solutions of sys and measures curvature and torsion of the
/// graphs x -> (x, y(x)); circles and lines have constant curvature and
/// zero torsion.
OracleReport numeric_circle_oracle(const OdeSystem& sys, int n_trajectories, double tolerance,
                                   std::uint64_t seed = 0);

/// Curvature deviation and maximal torsion of one sampled trajectory.
void measure_curve(const Trajectory& t, int m, double& curvature_mean, double& curvature_deviation,
                   double& max_torsion);

}  // namespace confgeo
