#include "selfsim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selfsim/errors.hpp"

namespace selfsim {

void IntegrationOptions::validate() const {
  auto tol_ok = [](double t) { return t > 1e-14 && t < 1e-2; };
  if (!tol_ok(rel_tol) || !tol_ok(abs_tol)) throw InvalidArgument("tolerances must lie in (1e-14, 1e-2)");
  if (!std::isfinite(r_end)) throw InvalidArgument("r_end must be finite");
  if (samples_per_decade < 1) throw InvalidArgument("samples_per_decade must be positive");
  if (max_steps == 0) throw InvalidArgument("max_steps must be positive");
  if (value_floor && value_ceiling && !(*value_floor < *value_ceiling))
    throw InvalidArgument("value_floor must lie below value_ceiling");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::span_end: return "span_end";
    case Termination::hit_floor: return "hit_floor";
    case Termination::hit_ceiling: return "hit_ceiling";
    case Termination::departure: return "departure";
    case Termination::step_underflow: return "step_underflow";
    case Termination::budget: return "budget";
    case Termination::analytic: return "analytic";
  }
  return "unknown";
}

Termination parse_termination(std::string_view text) {
  for (auto t : {Termination::span_end, Termination::hit_floor, Termination::hit_ceiling,
                 Termination::departure, Termination::step_underflow, Termination::budget,
                 Termination::analytic})
    if (to_string(t) == text) return t;
  throw InvalidArgument("unknown termination '" + std::string(text) + "'");
}

Trajectory::Trajectory(std::vector<Sample> samples, TrajectoryMeta meta, bool has_curvature)
    : samples_(std::move(samples)), meta_(std::move(meta)), has_curvature_(has_curvature) {
  if (samples_.empty()) throw InvalidArgument("Trajectory: no samples");
  for (const auto& s : samples_)
    if (!std::isfinite(s.coord) || !std::isfinite(s.value) || !std::isfinite(s.slope))
      throw InvalidArgument("Trajectory: non-finite sample");
  if (samples_.size() >= 2) {
    const bool up = samples_[1].coord > samples_[0].coord;
    for (std::size_t i = 1; i < samples_.size(); ++i) {
      const bool ok = up ? samples_[i].coord > samples_[i - 1].coord : samples_[i].coord < samples_[i - 1].coord;
      if (!ok) throw InvalidArgument("Trajectory: coordinates must be strictly monotone");
    }
  }
}

double Trajectory::coord_min() const { return std::min(samples_.front().coord, samples_.back().coord); }
double Trajectory::coord_max() const { return std::max(samples_.front().coord, samples_.back().coord); }

ProfileState Trajectory::state(std::size_t i) const {
  const Sample& s = samples_.at(i);
  return ProfileState{s.coord, s.value, s.slope, meta_.frame, meta_.kind, meta_.params};
}

namespace {

Sample hermite_quintic(const Sample& a, const Sample& b, double x) {
  const double h = b.coord - a.coord;
  const double t = (x - a.coord) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double H3 = 0.5 * t3 - t4 + 0.5 * t5;
  const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double H5 = 10 * t3 - 15 * t4 + 6 * t5;
  const double D0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double D1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double D2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
  const double D3 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
  const double D4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double D5 = 30 * t2 - 60 * t3 + 30 * t4;
  const double S0 = -60 * t + 180 * t2 - 120 * t3;
  const double S1 = -36 * t + 96 * t2 - 60 * t3;
  const double S2 = 1 - 9 * t + 18 * t2 - 10 * t3;
  const double S3 = 3 * t - 12 * t2 + 10 * t3;
  const double S4 = -24 * t + 84 * t2 - 60 * t3;
  const double S5 = 60 * t - 180 * t2 + 120 * t3;
  const double h2 = h * h;
  Sample out;
  out.coord = x;
  out.value = H0 * a.value + H1 * h * a.slope + H2 * h2 * a.curvature + H3 * h2 * b.curvature +
              H4 * h * b.slope + H5 * b.value;
  out.slope = (D0 * a.value + D1 * h * a.slope + D2 * h2 * a.curvature + D3 * h2 * b.curvature +
               D4 * h * b.slope + D5 * b.value) / h;
  out.curvature = (S0 * a.value + S1 * h * a.slope + S2 * h2 * a.curvature + S3 * h2 * b.curvature +
                   S4 * h * b.slope + S5 * b.value) / h2;
  return out;
}

Sample hermite_cubic(const Sample& a, const Sample& b, double x) {
  const double h = b.coord - a.coord;
  const double t = (x - a.coord) / h;
  const double t2 = t * t, t3 = t2 * t;
  Sample out;
  out.coord = x;
  out.value = (2 * t3 - 3 * t2 + 1) * a.value + (t3 - 2 * t2 + t) * h * a.slope + (-2 * t3 + 3 * t2) * b.value +
              (t3 - t2) * h * b.slope;
  out.slope = ((6 * t2 - 6 * t) * a.value + (3 * t2 - 4 * t + 1) * h * a.slope + (-6 * t2 + 6 * t) * b.value +
               (3 * t2 - 2 * t) * h * b.slope) / h;
  out.curvature = ((12 * t - 6) * a.value + (6 * t - 4) * h * a.slope + (-12 * t + 6) * b.value +
                   (6 * t - 2) * h * b.slope) / (h * h);
  return out;
}

}  // namespace

Sample Trajectory::interpolate(double x) const {
  const double lo = coord_min(), hi = coord_max();
  if (!(x >= lo && x <= hi)) throw InvalidArgument("interpolate: coordinate outside trajectory span");
  if (samples_.size() == 1) return samples_.front();
  const bool up = increasing();
  // Index of the first sample strictly past x in the direction of travel.
  auto it = up ? std::upper_bound(samples_.begin(), samples_.end(), x,
                                  [](double v, const Sample& s) { return v < s.coord; })
               : std::upper_bound(samples_.begin(), samples_.end(), x,
                                  [](double v, const Sample& s) { return v > s.coord; });
  std::size_t j = static_cast<std::size_t>(it - samples_.begin());
  if (j == 0) j = 1;
  if (j >= samples_.size()) j = samples_.size() - 1;
  const Sample& a = samples_[j - 1];
  const Sample& b = samples_[j];
  if (x == a.coord) return a;
  if (x == b.coord) return b;
  return has_curvature_ ? hermite_quintic(a, b, x) : hermite_cubic(a, b, x);
}

Trajectory Trajectory::restricted(double lo, double hi) const {
  std::vector<Sample> kept;
  for (const auto& s : samples_)
    if (s.coord >= lo && s.coord <= hi) kept.push_back(s);
  if (kept.empty()) throw InsufficientData("restricted: no samples in range");
  return Trajectory(std::move(kept), meta_, has_curvature_);
}

Trajectory Trajectory::ascending() const {
  if (increasing()) return *this;
  std::vector<Sample> rev(samples_.rbegin(), samples_.rend());
  return Trajectory(std::move(rev), meta_, has_curvature_);
}

Trajectory transform_trajectory(const Trajectory& traj, Frame target) {
  const auto& meta = traj.meta();
  std::vector<Sample> out;
  out.reserve(traj.size());
  for (const auto& s : traj.samples()) {
    const Jet j = transform_jet(Jet{s.coord, s.value, s.slope, s.curvature}, meta.frame, target, meta.params);
    out.push_back(Sample{j.coord, j.value, j.slope, traj.has_curvature() ? j.curvature : 0.0});
  }
  TrajectoryMeta m = meta;
  m.frame = target;
  if (m.termination_coord) {
    if (meta.frame == Frame::log_phase && target != Frame::log_phase) m.termination_coord = std::exp(*m.termination_coord);
    if (meta.frame != Frame::log_phase && target == Frame::log_phase) m.termination_coord = std::log(*m.termination_coord);
  }
  return Trajectory(std::move(out), std::move(m), traj.has_curvature());
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw InvalidArgument("log_grid: need 0 < lo < hi, count >= 2");
  std::vector<double> g(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

Trajectory sample_u_star(const Params& params, EquationKind kind, Frame frame, double r_lo, double r_hi,
                         std::size_t count) {
  std::vector<Sample> out;
  out.reserve(count);
  for (double r : log_grid(r_lo, r_hi, count)) {
    const Jet j = transform_jet(u_star(params, r), Frame::physical_w, frame, params);
    out.push_back(Sample{j.coord, j.value, j.slope, j.curvature});
  }
  TrajectoryMeta m;
  m.kind = kind;
  m.frame = frame;
  m.params = params;
  return Trajectory(std::move(out), std::move(m), true);
}

Trajectory sample_constant(const Params& params, EquationKind kind, double value, double r_lo, double r_hi,
                           std::size_t count) {
  std::vector<Sample> out;
  out.reserve(count);
  for (double r : log_grid(r_lo, r_hi, count)) out.push_back(Sample{r, value, 0.0, 0.0});
  TrajectoryMeta m;
  m.kind = kind;
  m.frame = Frame::physical_w;
  m.params = params;
  return Trajectory(std::move(out), std::move(m), true);
}

double residual_of(const Trajectory& traj) {
  if (traj.size() < 3) throw InsufficientData("residual_of: needs at least three samples");
  const auto& m = traj.meta();
  const auto s = traj.samples();
  double worst = 0.0;
  auto account = [&](const Sample& x, double second) {
    const Derivative d = rhs(m.kind, m.frame, m.params, x.coord, x.value, x.slope);
    worst = std::max(worst, std::abs(second - d.dslope) / std::max(1.0, std::abs(x.value)));
  };
  if (traj.has_curvature()) {
    for (const auto& x : s) account(x, x.curvature);
  } else {
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      const double h1 = s[i].coord - s[i - 1].coord;
      const double h2 = s[i + 1].coord - s[i].coord;
      const double second = -h2 / (h1 * (h1 + h2)) * s[i - 1].slope + (h2 - h1) / (h1 * h2) * s[i].slope +
                            h1 / (h2 * (h1 + h2)) * s[i + 1].slope;
      account(s[i], second);
    }
  }
  return worst;
}

}  // namespace selfsim
