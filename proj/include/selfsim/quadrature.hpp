#pragma once

#include <functional>
#include <vector>

#include "selfsim/trajectory.hpp"

namespace selfsim {

/// Integrand evaluated on an interpolated sample of a trajectory.
using SampleIntegrand = std::function<double(const Sample&)>;

struct QuadratureResult {
  double value = 0.0;
  int subdivisions = 0;  // per sample interval at acceptance
  bool converged = false;
};

/// Integral over [lo, hi] (coordinates of the trajectory's frame) of
/// `f(interpolate(x)) dx`. Each sample interval inside the range is split
/// into k equal pieces carrying a 5-point Gauss-Legendre rule; k doubles
/// from 1 until two successive totals agree to `rel_tol` (or k reaches 64).
QuadratureResult integrate_range(const Trajectory& traj, double lo, double hi, const SampleIntegrand& f,
                                 double rel_tol = 1e-8);

/// Running integral from the first sample to each sample, in sample order
/// (sign follows the direction of travel). Refinement as above, applied to
/// the whole span.
std::vector<double> cumulative_integral(const Trajectory& traj, const SampleIntegrand& f,
                                        double rel_tol = 1e-8);

}  // namespace selfsim
