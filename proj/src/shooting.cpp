#include "selfsim/shooting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "selfsim/errors.hpp"

namespace selfsim {

std::string_view to_string(ShotTag tag) {
  switch (tag) {
    case ShotTag::positive_decaying: return "PositiveDecaying";
    case ShotTag::hits_zero: return "HitsZero";
    case ShotTag::blowup: return "Blowup";
    case ShotTag::undetermined: return "Undetermined";
  }
  return "unknown";
}

ShotOptions default_shot_options(EquationKind kind) {
  ShotOptions o;
  o.integration.rel_tol = 1e-11;
  o.integration.abs_tol = 1e-13;
  switch (kind) {
    case EquationKind::forward_profile: o.integration.r_end = 100.0; break;
    case EquationKind::backward_profile:
      o.integration.r_end = 20.0;
      o.integration.detect_departure = true;
      break;
    case EquationKind::steady: o.integration.r_end = 1e4; break;
  }
  return o;
}

namespace {

bool is_kappa(EquationKind kind, const Params& k, double a) {
  return kind == EquationKind::backward_profile && std::abs(a - k.kappa) <= 4e-16 * k.kappa;
}

ShotClassification classify_trajectory(EquationKind kind, const Params& k, double a, const Trajectory& traj) {
  ShotClassification c;
  c.terminal = traj.state(traj.size() - 1);
  const auto& m = traj.meta();
  switch (m.termination) {
    case Termination::hit_floor:
      c.tag = ShotTag::hits_zero;
      c.radius = m.termination_coord;
      return c;
    case Termination::hit_ceiling:
    case Termination::departure:
      c.tag = ShotTag::blowup;
      c.radius = m.termination_coord;
      return c;
    case Termination::step_underflow:
    case Termination::budget:
    case Termination::analytic:
      c.tag = ShotTag::undetermined;
      return c;
    case Termination::span_end: break;
  }
  c.tag = ShotTag::positive_decaying;
  c.constant_profile = is_kappa(kind, k, a);
  if (kind == EquationKind::forward_profile && traj.coord_max() >= 50.0) c.ell = estimate_ell(traj);
  return c;
}

}  // namespace

Shot shoot(EquationKind kind, const Params& k, double a, const ShotOptions& options) {
  if (!(a > 0.0)) throw InvalidArgument("shoot: center value must be positive");
  const double eps = options.start_radius ? *options.start_radius
                                          : auto_start_radius(kind, k, a, options.integration.rel_tol);
  const ProfileState start = series_start(kind, k, is_kappa(kind, k, a) ? k.kappa : a, eps);
  Trajectory traj = integrate(start, options.integration);
  ShotClassification c = classify_trajectory(kind, k, a, traj);
  return Shot{std::move(c), std::move(traj)};
}

ShotClassification classify_shot(EquationKind kind, const Params& k, double a, const ShotOptions& options) {
  return shoot(kind, k, a, options).classification;
}

EllEstimate estimate_ell(const Trajectory& traj) {
  const auto& m = traj.meta();
  if (m.frame != Frame::physical_w) throw InvalidArgument("estimate_ell: physical-frame trajectory required");
  const double r_end = traj.coord_max();
  if (r_end < 50.0) throw InsufficientData("estimate_ell: trajectory must reach r >= 50");
  EllEstimate e;
  e.radii = {0.5 * r_end, r_end / std::sqrt(2.0), r_end};
  for (int i = 0; i < 3; ++i) {
    const Sample s = traj.interpolate(e.radii[i]);
    e.raw[i] = std::pow(e.radii[i], m.params.alpha) * s.value;
  }
  const double d1 = e.raw[1] - e.raw[0];
  const double d2 = e.raw[2] - e.raw[1];
  const double denom = d2 - d1;
  e.value = (denom != 0.0 && std::abs(denom) > 1e-14 * std::abs(e.raw[2])) ? e.raw[2] - d2 * d2 / denom : e.raw[2];
  const auto [mn, mx] = std::minmax_element(e.raw.begin(), e.raw.end());
  e.converged = e.value > 0.0 && (*mx - *mn) <= 1e-4 * std::abs(e.value);
  return e;
}

BoundaryResult bisect_boundary(const Classifier& classify, double a_lo, double a_hi, double rel_width) {
  if (!(a_lo < a_hi)) throw InvalidArgument("bisect_boundary: need a_lo < a_hi");
  BoundaryResult r;
  r.a_lo = a_lo;
  r.a_hi = a_hi;
  r.tag_lo = classify(a_lo);
  r.tag_hi = classify(a_hi);
  if (r.tag_lo == ShotTag::undetermined || r.tag_hi == ShotTag::undetermined)
    throw BracketError("bisect_boundary: bracket end is undetermined");
  if (r.tag_lo == r.tag_hi)
    throw BracketError("bisect_boundary: both ends are " + std::string(to_string(r.tag_lo)));
  while (r.a_hi - r.a_lo > rel_width * std::max(1.0, 0.5 * (r.a_lo + r.a_hi))) {
    double mid = 0.5 * (r.a_lo + r.a_hi);
    if (mid <= r.a_lo || mid >= r.a_hi) break;
    ShotTag t = classify(mid);
    if (t == ShotTag::undetermined) {
      r.undetermined_probes.push_back(mid);
      const double quarter = 0.25 * (r.a_hi - r.a_lo);
      for (double alt : {mid - 0.5 * quarter, mid + 0.5 * quarter}) {
        t = classify(alt);
        if (t != ShotTag::undetermined) {
          mid = alt;
          break;
        }
        r.undetermined_probes.push_back(alt);
      }
      if (t == ShotTag::undetermined) throw Error("bisect_boundary: undetermined shots around " + std::to_string(mid));
    }
    if (t == r.tag_lo) r.a_lo = mid;
    else if (t == r.tag_hi) r.a_hi = mid;
    else throw BracketError("bisect_boundary: third tag " + std::string(to_string(t)) + " inside bracket");
    ++r.iterations;
  }
  r.a_star = 0.5 * (r.a_lo + r.a_hi);
  return r;
}

BoundaryResult bisect_boundary(EquationKind kind, const Params& k, double a_lo, double a_hi,
                               const ShotOptions& options, double rel_width) {
  return bisect_boundary([&](double a) { return classify_shot(kind, k, a, options).tag; }, a_lo, a_hi, rel_width);
}

ProfileCandidate boundary_profile(EquationKind kind, const Params& k, const BoundaryResult& boundary,
                                  const ShotOptions& options, double separation_tol) {
  // A common start radius keeps the three shots on the same grid.
  ShotOptions o = options;
  if (!o.start_radius) o.start_radius = auto_start_radius(kind, k, boundary.a_hi, o.integration.rel_tol);
  const Shot lo = shoot(kind, k, boundary.a_lo, o);
  const Shot hi = shoot(kind, k, boundary.a_hi, o);
  const Shot mid = shoot(kind, k, boundary.a_star, o);

  const double common_end = std::min({lo.trajectory.coord_max(), hi.trajectory.coord_max(), mid.trajectory.coord_max()});
  double reliable = mid.trajectory.front().coord;
  for (const auto& s : mid.trajectory.samples()) {
    if (s.coord > common_end) break;
    const double wl = lo.trajectory.interpolate(s.coord).value;
    const double wh = hi.trajectory.interpolate(s.coord).value;
    const double scale = std::max(std::abs(s.value), 1e-300);
    if (std::abs(wl - wh) > separation_tol * scale || s.value <= 0.0) break;
    reliable = s.coord;
  }
  ProfileCandidate c{boundary, mid.trajectory.restricted(mid.trajectory.coord_min(), reliable), reliable,
                     ShotTag::undetermined, false};
  bool positive = c.trajectory.size() >= 3;
  for (const auto& s : c.trajectory.samples()) positive = positive && s.value > 0.0;
  c.tag = positive ? ShotTag::positive_decaying : ShotTag::undetermined;
  c.nonconstant = std::abs(boundary.a_star - k.kappa) > 1e-3 * k.kappa;
  return c;
}

SweepResult sweep(EquationKind kind, const Params& k, std::vector<double> a_grid, const ShotOptions& options,
                  unsigned threads) {
  if (a_grid.empty()) throw InvalidArgument("sweep: empty grid");
  std::sort(a_grid.begin(), a_grid.end());
  SweepResult out;
  std::vector<double> unique;
  for (double a : a_grid) {
    if (!unique.empty() && a == unique.back()) out.duplicates.push_back(a);
    else unique.push_back(a);
  }
  out.grid.resize(unique.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < unique.size(); i = next++)
      out.grid[i] = SweepEntry{unique[i], classify_shot(kind, k, unique[i], options)};
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(unique.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i + 1 < out.grid.size(); ++i)
    if (out.grid[i].classification.tag != out.grid[i + 1].classification.tag) out.brackets.emplace_back(i, i + 1);
  return out;
}

LStarEstimate max_converged_ell(const std::vector<std::pair<double, EllEstimate>>& estimates) {
  LStarEstimate out;
  out.estimates = estimates;
  for (const auto& [a, e] : estimates) {
    if (!e.converged || !(e.value > 0.0)) {
      ++out.excluded_count;
      continue;
    }
    if (out.converged_count == 0 || e.value > out.value) {
      out.value = e.value;
      out.attained_at = a;
    }
    ++out.converged_count;
  }
  if (out.converged_count == 0) throw InsufficientData("estimate_L_star: no converged l estimate on the grid");
  return out;
}

LStarEstimate estimate_L_star(const Params& k, std::vector<double> a_grid, const ShotOptions& options,
                              unsigned threads) {
  const SweepResult s = sweep(EquationKind::forward_profile, k, std::move(a_grid), options, threads);
  std::vector<std::pair<double, EllEstimate>> est;
  for (const auto& e : s.grid)
    est.emplace_back(e.a, e.classification.ell.value_or(EllEstimate{}));
  return max_converged_ell(est);
}

ProbeReport uniqueness_probe(const Params& k, const std::vector<double>& delta_grid, const ProbeOptions& o) {
  const ExponentTable t = exponent_table(k.n);
  if (!(t.sobolev < k.p)) throw InvalidArgument("uniqueness_probe: requires p > p_S");
  const double L = k.L();
  const auto roots = indicial_roots(k.n, k.p);

  ProbeReport rep;
  rep.eps = o.eps;
  rep.r_inner = o.r_inner;
  rep.r_outer = o.r_outer;
  const auto& mu = o.root_index == 1 ? roots.first : roots.second;
  rep.predicted_slope = 1.0 / std::abs(mu.real());

  IntegrationOptions band;
  band.rel_tol = o.rel_tol;
  band.abs_tol = o.abs_tol;
  band.value_floor = 0.5 * L;
  band.value_ceiling = 1.5 * L;

  std::vector<double> xs, ys;
  for (double delta : delta_grid) {
    ProbeEntry e;
    e.delta = delta;
    const ProfileState start = (delta == 0.0 || roots.is_real())
                                   ? singular_start(o.kind, k, delta, o.root_index, o.eps)
                                   : spiral_start(o.kind, k, delta, o.phase, o.eps);
    IntegrationOptions in = band;
    in.r_end = o.r_inner;
    const Trajectory inward = integrate(start, in);
    IntegrationOptions out = band;
    out.r_end = o.r_outer;
    const Trajectory outward = integrate(start, out);

    e.inward_termination = inward.meta().termination;
    e.outward_termination = outward.meta().termination;
    auto exited = [](Termination term) { return term == Termination::hit_floor || term == Termination::hit_ceiling; };
    auto failed = [](Termination term) { return term == Termination::step_underflow || term == Termination::budget; };
    if (exited(e.inward_termination)) e.inward_exit_log_distance = std::log(o.eps / *inward.meta().termination_coord);
    if (exited(e.outward_termination)) e.outward_exit_radius = outward.meta().termination_coord;
    e.inconclusive = failed(e.inward_termination) || failed(e.outward_termination);
    e.survivor = !e.inconclusive && !e.inward_exit_log_distance && !e.outward_exit_radius;
    if (e.inconclusive) ++rep.inconclusive;
    if (e.survivor && delta != 0.0) ++rep.survivors;
    if (!e.inconclusive && delta != 0.0 && e.inward_exit_log_distance) {
      xs.push_back(std::abs(std::log(std::abs(delta))));
      ys.push_back(*e.inward_exit_log_distance);
    }
    rep.entries.push_back(e);
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    if (den != 0.0) rep.exit_slope = (n * sxy - sx * sy) / den;
  }
  return rep;
}

}  // namespace selfsim
