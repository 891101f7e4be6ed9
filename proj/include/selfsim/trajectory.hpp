#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selfsim/ode_core.hpp"

namespace selfsim {

struct IntegrationOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// End of the span in the frame's coordinate (r, or s for log_phase).
  /// The start is the initial state's coordinate; r_end below the start
  /// integrates inward.
  double r_end = 20.0;
  /// Dense output density, uniform in log r.
  int samples_per_decade = 200;
  std::size_t max_steps = 500000;
  /// Terminal event when the value drops below this level.
  std::optional<double> value_floor = 0.0;
  /// Terminal event when the value exceeds this level.
  std::optional<double> value_ceiling = 1e8;
  /// Terminal event for the backward equation: the shot leaves the
  /// r^{-alpha} branch upward along the e^{r^2/4} mode, detected as
  /// w' >= (r/4) w with w > 0 (physical frame only).
  bool detect_departure = false;

  /// Throws InvalidArgument unless tolerances lie in (1e-14, 1e-2) and the
  /// remaining fields are sane.
  void validate() const;
};

enum class Termination {
  span_end,
  hit_floor,
  hit_ceiling,
  departure,
  step_underflow,
  budget,
  analytic,
};

std::string_view to_string(Termination t);
Termination parse_termination(std::string_view text);

struct TrajectoryMeta {
  EquationKind kind = EquationKind::steady;
  Frame frame = Frame::physical_w;
  Params params;
  std::optional<IntegrationOptions> options;  // absent for analytic samples
  Termination termination = Termination::analytic;
  /// Coordinate where the terminal event was localized (or the last good
  /// coordinate for step_underflow/budget).
  std::optional<double> termination_coord;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
};

struct Sample {
  double coord = 0.0;
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;  // meaningful only when Trajectory::has_curvature()
};

/// Ordered, immutable sampled solution. Coordinates are strictly monotone
/// (increasing or decreasing); all samples share frame, kind and params.
class Trajectory {
 public:
  /// Throws InvalidArgument on fewer than one sample, non-monotone or
  /// non-finite coordinates.
  Trajectory(std::vector<Sample> samples, TrajectoryMeta meta, bool has_curvature);

  std::span<const Sample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const Sample& front() const { return samples_.front(); }
  const Sample& back() const { return samples_.back(); }
  const TrajectoryMeta& meta() const { return meta_; }
  bool has_curvature() const { return has_curvature_; }
  bool increasing() const { return samples_.size() < 2 || samples_[1].coord > samples_[0].coord; }

  double coord_min() const;
  double coord_max() const;

  ProfileState state(std::size_t i) const;

  /// Hermite interpolation: quintic on (value, slope, curvature) when
  /// curvature is present, cubic on (value, slope) otherwise. The returned
  /// slope is the derivative of the interpolant. Throws InvalidArgument
  /// outside [coord_min, coord_max].
  Sample interpolate(double coord) const;

  /// Samples with coordinate in [lo, hi] (either orientation preserved).
  Trajectory restricted(double lo, double hi) const;

  /// Same trajectory sorted by increasing coordinate.
  Trajectory ascending() const;

 private:
  std::vector<Sample> samples_;
  TrajectoryMeta meta_;
  bool has_curvature_ = false;
};

/// Sample-wise change of frame (curvature carried when present).
Trajectory transform_trajectory(const Trajectory& traj, Frame target);

/// Coordinates uniformly spaced in log r between lo and hi (inclusive),
/// `count` points. Requires 0 < lo < hi and count >= 2.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// U_* sampled at log-spaced radii in the requested frame, with exact
/// derivatives. Requires p > p_sg.
Trajectory sample_u_star(const Params& params, EquationKind kind, Frame frame, double r_lo, double r_hi,
                         std::size_t count);

/// The constant function `value` in the physical frame.
Trajectory sample_constant(const Params& params, EquationKind kind, double value, double r_lo, double r_hi,
                           std::size_t count);

/// Max over samples of |value'' - F(coord, value, slope)| / max(1, |value|),
/// where value'' is the stored curvature when present and a three-point
/// non-uniform central difference of the slope otherwise (interior samples
/// only). Throws InsufficientData for fewer than three samples.
double residual_of(const Trajectory& traj);

}  // namespace selfsim
