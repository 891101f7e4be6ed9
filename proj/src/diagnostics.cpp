#include "selfsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selfsim/errors.hpp"

namespace selfsim {

SignChangeReport sign_changes(std::span<const double> coords, std::span<const double> values, double dead_band_rel) {
  if (coords.size() != values.size()) throw InvalidArgument("sign_changes: coords and values differ in length");
  if (values.size() < 2) throw InsufficientData("sign_changes: need at least two samples");
  if (!(dead_band_rel >= 0.0)) throw InvalidArgument("sign_changes: dead band must be nonnegative");

  double scale = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("sign_changes: non-finite value");
    scale = std::max(scale, std::abs(v));
  }
  SignChangeReport rep;
  const double band = dead_band_rel * scale;
  auto sign = [&](double v) { return std::abs(v) <= band ? 0 : (v > 0 ? 1 : -1); };

  std::ptrdiff_t last = -1;  // last index with a nonzero sign
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int s = sign(values[i]);
    if (s == 0) continue;
    if (last >= 0) {
      const auto j = static_cast<std::size_t>(last);
      const bool merged = i > j + 1;
      if (merged) rep.clustered = true;
      if (s != sign(values[j])) {
        double x;
        if (merged) {
          x = 0.5 * (coords[j + 1] + coords[i - 1]);
        } else {
          const double t = values[j] / (values[j] - values[i]);
          x = coords[j] + t * (coords[i] - coords[j]);
        }
        rep.locations.push_back(x);
      }
    }
    last = static_cast<std::ptrdiff_t>(i);
  }
  rep.degenerate = last < 0;
  rep.count = rep.locations.size();
  return rep;
}

SignChangeReport intersection_count(const Trajectory& a, const Trajectory& b, std::size_t points_per_decade,
                                    double dead_band_rel) {
  if (a.meta().frame != b.meta().frame) throw InvalidArgument("intersection_count: frames differ");
  if (points_per_decade < 2) throw InvalidArgument("intersection_count: need at least two points per decade");
  const double lo = std::max(a.coord_min(), b.coord_min());
  const double hi = std::min(a.coord_max(), b.coord_max());
  if (!(lo < hi)) throw InvalidArgument("intersection_count: spans do not overlap");

  std::vector<double> grid;
  if (a.meta().frame == Frame::log_phase) {
    const auto count = std::max<std::size_t>(2, static_cast<std::size_t>((hi - lo) / std::log(10.0) * points_per_decade));
    grid.resize(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    grid.back() = hi;
  } else {
    if (!(lo > 0.0)) throw InvalidArgument("intersection_count: radii must be positive");
    const auto count = std::max<std::size_t>(2, static_cast<std::size_t>(std::log10(hi / lo) * points_per_decade));
    grid = log_grid(lo, hi, count);
  }
  std::vector<double> diff(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) diff[i] = a.interpolate(grid[i]).value - b.interpolate(grid[i]).value;
  return sign_changes(grid, diff, dead_band_rel);
}

MonotonicityReport monotonicity_report(const Trajectory& traj) {
  const auto& m = traj.meta();
  if (m.frame != Frame::physical_w) throw InvalidArgument("monotonicity_report: physical_w frame required");
  if (m.kind != EquationKind::forward_profile) throw InvalidArgument("monotonicity_report: forward profile required");
  MonotonicityReport rep;
  rep.max_slope = -std::numeric_limits<double>::infinity();
  for (const auto& s : traj.samples()) {
    rep.scale = std::max(rep.scale, std::abs(s.value));
    if (s.slope > rep.max_slope) {
      rep.max_slope = s.slope;
      rep.at = s.coord;
    }
  }
  rep.pass = rep.max_slope <= 1e-12 * rep.scale;
  return rep;
}

GrowthBoundReport growth_bound_report(const Trajectory& traj) {
  const auto& m = traj.meta();
  if (m.frame != Frame::physical_w) throw InvalidArgument("growth_bound_report: physical_w frame required");
  GrowthBoundReport rep;
  rep.alpha = m.params.alpha;
  rep.r_min = traj.coord_min();
  if (!(rep.r_min <= 1e-3)) throw InsufficientData("growth_bound_report: trajectory must reach r <= 1e-3");

  bool any = false;
  for (const auto& s : traj.samples()) {
    if (s.coord >= 1.0) continue;
    any = true;
    const double curv = rhs(m.kind, m.frame, m.params, s.coord, s.value, s.slope).dslope;
    const std::array<double, 3> terms{std::pow(s.coord, rep.alpha) * std::abs(s.value),
                                      std::pow(s.coord, rep.alpha + 1.0) * std::abs(s.slope),
                                      std::pow(s.coord, rep.alpha + 2.0) * std::abs(curv)};
    for (int i = 0; i < 3; ++i) {
      rep.suprema[i] = std::max(rep.suprema[i], terms[i]);
      if (s.coord >= 2.0 * rep.r_min) rep.suprema_coarse[i] = std::max(rep.suprema_coarse[i], terms[i]);
    }
    rep.slope_over_r = std::max(rep.slope_over_r, std::abs(s.slope) / s.coord);
  }
  if (!any) throw InsufficientData("growth_bound_report: no samples below r = 1");
  rep.finite = std::all_of(rep.suprema.begin(), rep.suprema.end(), [](double x) { return std::isfinite(x); });
  rep.stable = true;
  for (int i = 0; i < 3; ++i) {
    const double hi = std::max(rep.suprema[i], rep.suprema_coarse[i]);
    const double lo = std::min(rep.suprema[i], rep.suprema_coarse[i]);
    if (hi > 0.0 && !(hi < 2.0 * lo)) rep.stable = false;
  }
  rep.pass = rep.finite && rep.stable;
  return rep;
}

bool suprema_stable(const GrowthBoundReport& a, const GrowthBoundReport& b, double factor) {
  for (int i = 0; i < 3; ++i) {
    const double hi = std::max(a.suprema[i], b.suprema[i]);
    const double lo = std::min(a.suprema[i], b.suprema[i]);
    if (!std::isfinite(hi) || (hi > 0.0 && !(hi < factor * lo))) return false;
  }
  return true;
}

std::string_view to_string(OriginLimit limit) {
  switch (limit) {
    case OriginLimit::tends_to_zero: return "tends-to-0";
    case OriginLimit::tends_to_L: return "tends-to-L";
    case OriginLimit::undetermined: return "undetermined";
  }
  return "unknown";
}

OriginLimitReport origin_limit_classify(const Trajectory& traj) {
  const auto& m = traj.meta();
  if (m.frame != Frame::scaled_v) throw InvalidArgument("origin_limit_classify: scaled_v frame required");
  const double L = m.params.L();
  OriginLimitReport rep;
  rep.r_min = traj.coord_min();
  rep.sufficient_depth = rep.r_min <= 1e-6;
  if (!rep.sufficient_depth) return rep;

  for (const auto& s : traj.samples()) {
    if (s.coord > 10.0 * rep.r_min) continue;
    rep.max_distance_zero = std::max(rep.max_distance_zero, std::abs(s.value));
    rep.max_distance_L = std::max(rep.max_distance_L, std::abs(s.value - L));
    rep.max_rv_prime = std::max(rep.max_rv_prime, std::abs(s.coord * s.slope));
  }
  if (rep.max_rv_prime < 0.01 * L) {
    if (rep.max_distance_zero <= 0.05 * L) rep.limit = OriginLimit::tends_to_zero;
    else if (rep.max_distance_L <= 0.05 * L) rep.limit = OriginLimit::tends_to_L;
  }
  return rep;
}

UpperBoundReport upper_bound_constant(const Trajectory& traj) {
  const auto& m = traj.meta();
  if (m.frame != Frame::physical_w) throw InvalidArgument("upper_bound_constant: physical_w frame required");
  UpperBoundReport rep;
  for (const auto& s : traj.samples()) {
    const double q = s.value / (1.0 + std::pow(s.coord, -m.params.alpha));
    if (q > rep.C) {
      rep.C = q;
      rep.at = s.coord;
    }
  }
  return rep;
}

Trajectory scaling_family(const Trajectory& steady, double lambda) {
  const auto& m = steady.meta();
  if (m.kind != EquationKind::steady) throw InvalidArgument("scaling_family: steady trajectory required");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("scaling_family: lambda must be positive");
  const double mu = std::pow(lambda, 1.0 / m.params.alpha);  // dilation of the radius
  std::vector<Sample> out;
  out.reserve(steady.size());
  for (const auto& s : steady.samples()) {
    Sample t = s;
    switch (m.frame) {
      case Frame::physical_w:
        t.coord = s.coord / mu;
        t.value = lambda * s.value;
        t.slope = lambda * mu * s.slope;
        t.curvature = lambda * mu * mu * s.curvature;
        break;
      case Frame::scaled_v:
      case Frame::normalized_h:
        t.coord = s.coord / mu;
        t.slope = mu * s.slope;
        t.curvature = mu * mu * s.curvature;
        break;
      case Frame::log_phase:
        t.coord = s.coord - std::log(mu);
        break;
    }
    out.push_back(t);
  }
  TrajectoryMeta meta = m;
  if (meta.termination_coord)
    meta.termination_coord = m.frame == Frame::log_phase ? *m.termination_coord - std::log(mu) : *m.termination_coord / mu;
  return Trajectory(std::move(out), std::move(meta), steady.has_curvature());
}

}  // namespace selfsim
