#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "selfsim/trajectory.hpp"

namespace selfsim {

struct SignChangeReport {
  std::size_t count = 0;
  std::vector<double> locations;
  /// A run of dead-band samples was merged (crossing or tangential touch).
  bool clustered = false;
  /// Every value sits inside the dead band.
  bool degenerate = false;
};

/// Strict sign alternations of `values` over `coords`. Values with
/// |v| <= dead_band_rel * max|v| count as zero and are merged into the
/// neighbouring interval; a touch that returns to the same sign is not a
/// crossing. Requires at least two samples of equal length.
SignChangeReport sign_changes(std::span<const double> coords, std::span<const double> values,
                              double dead_band_rel = 1e-10);

/// Sign changes of value1 - value2 on the overlap of the spans, both
/// resampled by Hermite interpolation onto a common grid (log-uniform in r,
/// uniform in s for log_phase). Throws InvalidArgument on a frame mismatch
/// or disjoint spans.
SignChangeReport intersection_count(const Trajectory& a, const Trajectory& b, std::size_t points_per_decade = 400,
                                    double dead_band_rel = 1e-10);

struct MonotonicityReport {
  double max_slope = 0.0;
  double at = 0.0;
  double scale = 0.0;  // max |w|
  bool pass = false;   // max_slope <= 1e-12 * scale
};

/// Requires a physical_w trajectory of the forward kind.
MonotonicityReport monotonicity_report(const Trajectory& traj);

struct GrowthBoundReport {
  double alpha = 0.0;
  double r_min = 0.0;
  /// sup_{r_min <= r < 1} r^{alpha+i} |w^(i)(r)|, i = 0, 1, 2; w'' from the ODE.
  std::array<double, 3> suprema{};
  /// The same suprema restricted to r >= 2 r_min.
  std::array<double, 3> suprema_coarse{};
  /// sup_{r < 1} |w'(r)| / r.
  double slope_over_r = 0.0;
  bool finite = false;
  bool stable = false;  // every suprema/suprema_coarse ratio below 2
  bool pass = false;
};

/// Requires a physical_w trajectory reaching r_min <= 1e-3; throws
/// InsufficientData otherwise.
GrowthBoundReport growth_bound_report(const Trajectory& traj);

/// True when every supremum of `a` and `b` differs by less than `factor`.
bool suprema_stable(const GrowthBoundReport& a, const GrowthBoundReport& b, double factor = 2.0);

enum class OriginLimit { tends_to_zero, tends_to_L, undetermined };

std::string_view to_string(OriginLimit limit);

struct OriginLimitReport {
  OriginLimit limit = OriginLimit::undetermined;
  double r_min = 0.0;
  double max_distance_zero = 0.0;  // max |v| over the deepest decade
  double max_distance_L = 0.0;     // max |v - L|
  double max_rv_prime = 0.0;       // max |r v'|
  bool sufficient_depth = false;
};

/// Classifies v(r) as r -> 0 from the deepest decade of samples: within
/// 0.05 L of 0 or of L, with |r v'| < 0.01 L. A trajectory not reaching
/// r <= 1e-6 is reported undetermined with sufficient_depth false.
OriginLimitReport origin_limit_classify(const Trajectory& traj);

struct UpperBoundReport {
  double C = 0.0;  // max w / (1 + r^{-alpha})
  double at = 0.0;
};

/// Measured constant in w <= C (1 + r^{-alpha}); physical_w frame.
UpperBoundReport upper_bound_constant(const Trajectory& traj);

/// Member lambda of the steady scaling family U_lambda(r) = lambda U(lambda^{1/alpha} r),
/// built from a steady trajectory in the physical, scaled or normalized
/// frame. In the scaled frames it is a pure dilation of the coordinate.
Trajectory scaling_family(const Trajectory& steady, double lambda);

}  // namespace selfsim
