#include "selfsim/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "selfsim/errors.hpp"
#include "selfsim/quadrature.hpp"

namespace selfsim {

namespace {

using Vec = std::array<double, 2>;

// Dormand-Prince 5(4) tableau with the continuous extension of
// Hairer, Norsett & Wanner (DOPRI5).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct System {
  EquationKind kind;
  Frame frame;
  const Params& params;

  // Trial stages may dip below zero just before a floor event; the odd
  // extension keeps them finite and the event ends the run there.
  Vec operator()(double x, const Vec& y) const {
    const Derivative d = rhs(kind, frame, params, x, y[0], y[1], PowerPolicy::odd_extension);
    return {d.dvalue, d.dslope};
  }
};

// Continuous extension over one accepted step [x0, x0 + h].
struct DenseStep {
  double x0 = 0.0;
  double h = 0.0;
  std::array<Vec, 5> rc{};

  Vec value(double x) const {
    const double t = (x - x0) / h;
    const double t1 = 1.0 - t;
    Vec out{};
    for (int i = 0; i < 2; ++i)
      out[i] = rc[0][i] + t * (rc[1][i] + t1 * (rc[2][i] + t * (rc[3][i] + t1 * rc[4][i])));
    return out;
  }

  Vec derivative(double x) const {
    const double t = (x - x0) / h;
    const double t1 = 1.0 - t;
    Vec out{};
    for (int i = 0; i < 2; ++i) {
      const double q = rc[2][i] + t * (rc[3][i] + t1 * rc[4][i]);
      const double dq = rc[3][i] + (1.0 - 2.0 * t) * rc[4][i];
      const double inner = rc[1][i] + t1 * q;
      const double dinner = -q + t1 * dq;
      out[i] = (inner + t * dinner) / h;
    }
    return out;
  }
};

// Dense-output coordinates: uniform in log r (uniform in s for log_phase).
class DenseGrid {
 public:
  DenseGrid(double start, double end, int per_decade, bool log_coord)
      : start_(start), end_(end), log_coord_(log_coord), forward_(end > start) {
    const double step = std::log(10.0) / per_decade;
    step_ = forward_ ? step : -step;
    origin_ = log_coord_ ? start_ : std::log(start_);
  }

  // k-th grid coordinate (k = 0 is the start).
  double at(long k) const {
    const double s = origin_ + static_cast<double>(k) * step_;
    return log_coord_ ? s : std::exp(s);
  }

  bool before_or_at(double x, double limit) const { return forward_ ? x <= limit : x >= limit; }

 private:
  double start_, end_;
  bool log_coord_, forward_;
  double step_ = 0.0, origin_ = 0.0;
};

double error_norm(const Vec& y0, const Vec& y1, const Vec& err, const IntegrationOptions& o) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double sc = o.abs_tol + o.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    sum += (err[i] / sc) * (err[i] / sc);
  }
  return std::sqrt(0.5 * sum);
}

double initial_step(const System& f, double x0, const Vec& y0, const Vec& k1, double direction,
                    const IntegrationOptions& o, double span) {
  // Hairer's starting-step heuristic.
  double dnf = 0.0, dny = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double sk = o.abs_tol + o.rel_tol * std::abs(y0[i]);
    dnf += (k1[i] / sk) * (k1[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, span);
  Vec y1{};
  for (int i = 0; i < 2; ++i) y1[i] = y0[i] + direction * h * k1[i];
  Vec k2;
  try {
    k2 = f(x0 + direction * h, y1);
  } catch (const Error&) {
    return h * 1e-3;
  }
  double der2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double sk = o.abs_tol + o.rel_tol * std::abs(y0[i]);
    der2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, span});
}

struct EventHit {
  Termination reason;
  double x;
};

// Event functions: a terminal event fires when g changes sign from
// negative to nonnegative across a step.
double event_value(Termination which, const Params& k, Frame frame, double x, const Vec& y,
                   const IntegrationOptions& o) {
  switch (which) {
    case Termination::hit_floor: return *o.value_floor - y[0];
    case Termination::hit_ceiling: return y[0] - *o.value_ceiling;
    case Termination::departure: {
      (void)k;
      (void)frame;
      // w' - (r/4) w, gated on w > 0.
      if (y[0] <= 0.0) return -1.0;
      return y[1] - 0.25 * x * y[0];
    }
    default: return -1.0;
  }
}

}  // namespace

Trajectory integrate(const ProfileState& initial, const IntegrationOptions& options) {
  options.validate();
  const auto& k = initial.params;
  const bool log_coord = initial.frame == Frame::log_phase;
  if (!log_coord && !(initial.coord > 0.0)) throw InvalidArgument("integrate: start radius must be positive");
  if (!log_coord && !(options.r_end > 0.0)) throw InvalidArgument("integrate: r_end must be positive");
  if (options.r_end == initial.coord) throw InvalidArgument("integrate: empty span");
  if (options.detect_departure && initial.frame != Frame::physical_w)
    throw InvalidArgument("integrate: departure detection needs the physical frame");
  // Rejects unsupported frame/kind pairs and undefined L before stepping.
  (void)rhs(initial);

  const System f{initial.kind, initial.frame, k};
  const double x_end = options.r_end;
  const double direction = x_end > initial.coord ? 1.0 : -1.0;
  const double span = std::abs(x_end - initial.coord);

  std::vector<Termination> events;
  if (options.value_floor) events.push_back(Termination::hit_floor);
  if (options.value_ceiling) events.push_back(Termination::hit_ceiling);
  if (options.detect_departure) events.push_back(Termination::departure);

  TrajectoryMeta meta;
  meta.kind = initial.kind;
  meta.frame = initial.frame;
  meta.params = k;
  meta.options = options;
  meta.termination = Termination::span_end;

  std::vector<Sample> samples;
  double x = initial.coord;
  Vec y{initial.value, initial.slope};
  Vec k1 = f(x, y);
  samples.push_back(Sample{x, y[0], y[1], k1[1]});

  const DenseGrid grid(initial.coord, x_end, options.samples_per_decade, log_coord);
  long next_grid = 1;

  double h = initial_step(f, x, y, k1, direction, options, span);
  std::size_t steps = 0;
  const double facmin = 0.2, facmax = 10.0, safety = 0.9;

  std::optional<EventHit> hit;
  while (true) {
    if (steps >= options.max_steps) {
      meta.termination = Termination::budget;
      meta.termination_coord = x;
      break;
    }
    const double remaining = std::abs(x_end - x);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const double tiny = 1e-14 * std::max(1.0, std::abs(x));
    if (h < tiny) {
      meta.termination = Termination::step_underflow;
      meta.termination_coord = x;
      break;
    }
    const double hs = direction * h;

    Vec y2, y3, y4, y5, y6, y7, k2, k3, k4, k5, k6, k7, err;
    bool finite = true;
    try {
      for (int i = 0; i < 2; ++i) y2[i] = y[i] + hs * a21 * k1[i];
      k2 = f(x + c2 * hs, y2);
      for (int i = 0; i < 2; ++i) y3[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
      k3 = f(x + c3 * hs, y3);
      for (int i = 0; i < 2; ++i) y4[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = f(x + c4 * hs, y4);
      for (int i = 0; i < 2; ++i) y5[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = f(x + c5 * hs, y5);
      for (int i = 0; i < 2; ++i)
        y6[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      k6 = f(x + hs, y6);
      for (int i = 0; i < 2; ++i)
        y7[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      k7 = f(x + hs, y7);
      for (int i = 0; i < 2; ++i)
        err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      for (int i = 0; i < 2; ++i) finite = finite && std::isfinite(y7[i]) && std::isfinite(err[i]);
    } catch (const Error&) {
      finite = false;
    }

    const double en = finite ? error_norm(y, y7, err, options) : std::numeric_limits<double>::infinity();
    if (!(en <= 1.0)) {
      ++meta.steps_rejected;
      const double fac = std::isfinite(en) ? std::max(facmin, safety * std::pow(en, -0.2)) : facmin;
      h *= fac;
      ++steps;
      continue;
    }
    ++steps;
    ++meta.steps_accepted;

    DenseStep dense;
    dense.x0 = x;
    dense.h = hs;
    for (int i = 0; i < 2; ++i) {
      dense.rc[0][i] = y[i];
      dense.rc[1][i] = y7[i] - y[i];
      dense.rc[2][i] = hs * k1[i] - dense.rc[1][i];
      dense.rc[3][i] = dense.rc[1][i] - hs * k7[i] - dense.rc[2][i];
      dense.rc[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    const double x_new = last ? x_end : x + hs;

    // Earliest terminal event inside this step.
    for (Termination ev : events) {
      const double g0 = event_value(ev, k, initial.frame, x, y, options);
      const double g1 = event_value(ev, k, initial.frame, x_new, y7, options);
      if (!(g0 < 0.0 && g1 >= 0.0)) continue;
      double lo = x, hi = x_new;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (event_value(ev, k, initial.frame, mid, dense.value(mid), options) >= 0.0) hi = mid;
        else lo = mid;
        if (std::abs(hi - lo) <= 1e-3 * options.rel_tol * std::max(1.0, std::abs(hi))) break;
      }
      if (!hit || direction * (hi - hit->x) < 0.0) hit = EventHit{ev, hi};
    }
    const double x_stop = hit ? hit->x : x_new;

    // Dense samples strictly inside (x, x_stop]; the endpoint itself is
    // appended below.
    while (true) {
      const double g = grid.at(next_grid);
      if (!(direction * (g - x) > 0.0) || !(direction * (x_stop - g) > 0.0)) break;
      const Vec v = dense.value(g);
      const Vec dv = dense.derivative(g);
      samples.push_back(Sample{g, v[0], v[1], dv[1]});
      ++next_grid;
    }
    while (direction * (grid.at(next_grid) - x_stop) <= 0.0) ++next_grid;

    if (hit) {
      const Vec v = dense.value(hit->x);
      const Vec dv = dense.derivative(hit->x);
      if (samples.empty() || direction * (hit->x - samples.back().coord) > 0.0)
        samples.push_back(Sample{hit->x, v[0], v[1], dv[1]});
      meta.termination = hit->reason;
      meta.termination_coord = hit->x;
      break;
    }

    x = x_new;
    y = y7;
    k1 = k7;  // FSAL
    if (last) {
      if (direction * (x - samples.back().coord) > 0.0) samples.push_back(Sample{x, y[0], y[1], k1[1]});
      meta.termination = Termination::span_end;
      meta.termination_coord = x;
      break;
    }
    const double fac = en == 0.0 ? facmax : std::clamp(safety * std::pow(en, -0.2), facmin, facmax);
    h *= fac;
  }
  // Runs that stop early keep the last good state as the final sample.
  if (meta.termination == Termination::step_underflow || meta.termination == Termination::budget) {
    if (direction * (x - samples.back().coord) > 0.0) samples.push_back(Sample{x, y[0], y[1], k1[1]});
  }
  return Trajectory(std::move(samples), std::move(meta), true);
}

SeriesCoefficients series_coefficients(EquationKind kind, const Params& k, double a) {
  if (!(a > 0.0)) throw InvalidArgument("series start requires a > 0");
  const double q = static_cast<double>(drift_sign(kind));
  const double ap1 = std::pow(a, k.p - 1.0);
  SeriesCoefficients s;
  s.c = -(q * a / (k.p - 1.0) + a * ap1) / (2.0 * k.n);
  s.d = -s.c * (q * k.p / (k.p - 1.0) + k.p * ap1) / (4.0 * (k.n + 2.0));
  // The backward constant a = kappa has c = 0 analytically; keep it exact.
  if (kind == EquationKind::backward_profile && a == k.kappa) s = SeriesCoefficients{};
  return s;
}

ProfileState series_start(EquationKind kind, const Params& k, double a, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("series start requires eps > 0");
  const auto s = series_coefficients(kind, k, a);
  return ProfileState{eps, a + s.c * eps * eps, 2.0 * s.c * eps, Frame::physical_w, kind, k};
}

double auto_start_radius(EquationKind kind, const Params& k, double a, double rel_tol, double eps0) {
  const auto s = series_coefficients(kind, k, a);
  double eps = eps0;
  for (int i = 0; i < 60; ++i) {
    const double e2 = eps * eps;
    const double value_ratio = std::abs(s.d) * e2 * e2 / a;
    const double slope_ratio = s.c != 0.0 ? 2.0 * std::abs(s.d) * e2 / std::abs(s.c) : 0.0;
    if (std::max(value_ratio, slope_ratio) < rel_tol) return eps;
    eps *= 0.5;
  }
  return eps;
}

ProfileState singular_start(EquationKind kind, const Params& k, double delta, int root_index, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("singular start requires eps > 0");
  if (root_index != 1 && root_index != 2) throw InvalidArgument("root_index must be 1 or 2");
  const double L = k.L();
  ProfileState s{eps, L, 0.0, Frame::scaled_v, kind, k};
  if (delta == 0.0) return s;
  const auto roots = indicial_roots(k.n, k.p);
  if (!roots.is_real())
    throw ComplexRootError("indicial roots are complex; use spiral_start for p between p_JL* and p_JL");
  const double mu = (root_index == 1 ? roots.first : roots.second).real();
  s.value = L + delta;
  s.slope = mu * delta / eps;
  return s;
}

ProfileState spiral_start(EquationKind kind, const Params& k, double amplitude, double phase, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("spiral start requires eps > 0");
  const double L = k.L();
  const auto roots = indicial_roots(k.n, k.p);
  if (roots.is_real()) throw InvalidArgument("spiral_start: indicial roots are real");
  const double sigma = roots.first.real();
  const double omega = std::abs(roots.first.imag());
  ProfileState s{eps, L + amplitude * std::cos(phase), 0.0, Frame::scaled_v, kind, k};
  s.slope = amplitude / eps * (sigma * std::cos(phase) - omega * std::sin(phase));
  return s;
}

EnergyLedger energy_ledger(const Trajectory& traj) {
  const auto& m = traj.meta();
  if (m.frame != Frame::normalized_h) throw InvalidArgument("energy_ledger: trajectory must be in NormalizedH");
  if (m.kind == EquationKind::steady) throw InvalidArgument("energy_ledger: kind must be forward or backward");
  if (traj.size() < 2) throw InsufficientData("energy_ledger: needs at least two samples");
  const Params& k = m.params;
  const auto s = traj.samples();

  auto potential = [&](double h) {
    if (h < 0.0) throw DomainError("energy_ledger: negative h");
    return k.gamma * (std::pow(h, k.p + 1.0) / (k.p + 1.0) - 0.5 * h * h);
  };
  const auto I = cumulative_integral(traj, [](const Sample& x) {
    return x.slope * x.slope * x.coord * x.coord * x.coord;
  });
  const auto J = cumulative_integral(traj, [](const Sample& x) { return x.slope * x.slope * x.coord; });

  EnergyLedger led;
  led.kind = m.kind;
  led.beta = k.beta;
  led.sigma = drift_sign(m.kind);
  // Expected direction of c along increasing r.
  const double expected = m.kind == EquationKind::forward_profile ? -1.0 : 1.0;
  const double travel = traj.increasing() ? 1.0 : -1.0;
  double c0 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    EnergyLedger::Entry e;
    e.r = s[i].coord;
    e.c = 0.5 * e.r * e.r * s[i].slope * s[i].slope + potential(s[i].value);
    e.I = I[i];
    e.J = J[i];
    if (i == 0) c0 = e.c;
    e.residual = e.c - c0 + k.beta * e.J + led.sigma * 0.5 * e.I;
    led.residual = std::max(led.residual, std::abs(e.residual));
    led.scale = std::max({led.scale, std::abs(e.c), 0.5 * std::abs(e.I), std::abs(k.beta * e.J)});
    if (i > 0) {
      const auto& prev = led.entries.back();
      const double dc = (e.c - prev.c) * travel;
      const double dcorr = (e.c + k.beta * e.J - prev.c - k.beta * prev.J) * travel;
      led.c_monotonicity_violation = std::max(led.c_monotonicity_violation, -expected * dc);
      led.corrected_monotonicity_violation = std::max(led.corrected_monotonicity_violation, -expected * dcorr);
    }
    led.entries.push_back(e);
  }
  led.relative_residual = led.scale > 0.0 ? led.residual / led.scale : led.residual;
  return led;
}

PohozaevReport pohozaev_check(const Trajectory& traj, double rho, double R) {
  const auto& m = traj.meta();
  if (m.frame != Frame::scaled_v) throw InvalidArgument("pohozaev_check: trajectory must be in ScaledV");
  if (!(rho < R) || rho < traj.coord_min() || R > traj.coord_max())
    throw InvalidArgument("pohozaev_check: [rho, R] must lie inside the trajectory span");
  const Params& k = m.params;
  const double sigma = drift_sign(m.kind);
  auto A = [&](double v) {
    if (v < 0.0) throw DomainError("pohozaev_check: negative v");
    return std::pow(v, k.p + 1.0) / (k.p + 1.0) - 0.5 * k.gamma * v * v;
  };
  const Sample a = traj.interpolate(rho);
  const Sample b = traj.interpolate(R);
  PohozaevReport rep;
  rep.rho = rho;
  rep.R = R;
  rep.kinetic_jump = 0.5 * (R * R * b.slope * b.slope - rho * rho * a.slope * a.slope);
  rep.potential_jump = A(b.value) - A(a.value);
  rep.energy_integral =
      integrate_range(traj, rho, R, [](const Sample& x) { return x.slope * x.slope * x.coord; }).value;
  rep.linear_term = k.beta * rep.energy_integral;
  if (sigma != 0.0) {
    const double cubic = integrate_range(traj, rho, R, [](const Sample& x) {
                           return x.slope * x.slope * x.coord * x.coord * x.coord;
                         }).value;
    rep.cubic_term = 0.5 * sigma * cubic;
  }
  rep.residual = rep.kinetic_jump + rep.potential_jump + rep.linear_term + rep.cubic_term;
  rep.scale = std::max({std::abs(rep.kinetic_jump), std::abs(rep.potential_jump), std::abs(rep.linear_term),
                        std::abs(rep.cubic_term)});
  rep.relative_residual = rep.scale > 0.0 ? std::abs(rep.residual) / rep.scale : std::abs(rep.residual);
  return rep;
}

}  // namespace selfsim
