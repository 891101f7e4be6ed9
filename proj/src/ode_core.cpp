#include "selfsim/ode_core.hpp"

#include <cmath>
#include <string>

#include "selfsim/errors.hpp"
#include "selfsim/format.hpp"

namespace selfsim {

std::string_view to_string(EquationKind kind) {
  switch (kind) {
    case EquationKind::forward_profile: return "ForwardProfile";
    case EquationKind::backward_profile: return "BackwardProfile";
    case EquationKind::steady: return "Steady";
  }
  return "unknown";
}

std::string_view to_string(Frame frame) {
  switch (frame) {
    case Frame::physical_w: return "PhysicalW";
    case Frame::scaled_v: return "ScaledV";
    case Frame::normalized_h: return "NormalizedH";
    case Frame::log_phase: return "LogPhase";
  }
  return "unknown";
}

EquationKind parse_kind(std::string_view text) {
  if (text == "forward" || text == "ForwardProfile") return EquationKind::forward_profile;
  if (text == "backward" || text == "BackwardProfile") return EquationKind::backward_profile;
  if (text == "steady" || text == "Steady") return EquationKind::steady;
  throw InvalidArgument("unknown equation kind '" + std::string(text) + "'");
}

Frame parse_frame(std::string_view text) {
  if (text == "w" || text == "PhysicalW") return Frame::physical_w;
  if (text == "v" || text == "ScaledV") return Frame::scaled_v;
  if (text == "h" || text == "NormalizedH") return Frame::normalized_h;
  if (text == "log" || text == "LogPhase") return Frame::log_phase;
  throw InvalidArgument("unknown frame '" + std::string(text) + "'");
}

int drift_sign(EquationKind kind) {
  switch (kind) {
    case EquationKind::forward_profile: return 1;
    case EquationKind::backward_profile: return -1;
    case EquationKind::steady: return 0;
  }
  return 0;
}

double reaction_power(double x, double e, PowerPolicy policy) {
  if (x >= 0.0) return std::pow(x, e);
  if (e == std::floor(e)) return std::pow(x, e);
  if (policy == PowerPolicy::strict)
    throw DomainError("non-integer power " + shortest(e) + " of negative value " + shortest(x));
  return std::pow(-x, e);
}

namespace {

// R(v) = v^p - gamma v for the scaled frames; zero exactly at v = L.
double scaled_reaction(const Params& k, double v, PowerPolicy policy) {
  const double q = k.p - 1.0;
  if (k.has_L()) return k.gamma * v * (reaction_power(v / *k.amplitude, q, policy) - 1.0);
  return v * reaction_power(v, q, policy) - k.gamma * v;
}

void require_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("radial coordinate must be positive");
}

}  // namespace

Derivative rhs(EquationKind kind, Frame frame, const Params& k, double coord, double value, double slope,
               PowerPolicy policy) {
  if (!std::isfinite(value) || !std::isfinite(slope)) throw InvalidArgument("rhs: non-finite state");
  const double q = k.p - 1.0;
  const double drift = 0.5 * drift_sign(kind);
  Derivative d;
  d.dvalue = slope;
  switch (frame) {
    case Frame::physical_w: {
      const double r = coord;
      require_radius(r);
      double reaction = 0.0;
      switch (kind) {
        case EquationKind::forward_profile:
          reaction = value / q + value * reaction_power(value, q, policy);
          break;
        case EquationKind::backward_profile:
          reaction = (value / q) * (reaction_power(value / k.kappa, q, policy) - 1.0);
          break;
        case EquationKind::steady:
          reaction = value * reaction_power(value, q, policy);
          break;
      }
      d.dslope = -((k.n - 1.0) / r + drift * r) * slope - reaction;
      return d;
    }
    case Frame::scaled_v: {
      const double r = coord;
      require_radius(r);
      const double c1 = k.n - 1.0 - 2.0 * k.alpha;
      d.dslope = -(c1 / r + drift * r) * slope - scaled_reaction(k, value, policy) / (r * r);
      return d;
    }
    case Frame::normalized_h: {
      const double r = coord;
      require_radius(r);
      if (!k.has_L()) throw AmplitudeUndefined("NormalizedH frame requires p > p_sg");
      const double c1 = k.n - 1.0 - 2.0 * k.alpha;
      const double reaction = k.gamma * value * (reaction_power(value, q, policy) - 1.0);
      d.dslope = -(c1 / r + drift * r) * slope - reaction / (r * r);
      return d;
    }
    case Frame::log_phase: {
      if (kind != EquationKind::steady)
        throw UnsupportedCombination("LogPhase frame is autonomous only for the steady equation");
      d.dslope = -k.beta * slope - scaled_reaction(k, value, policy);
      return d;
    }
  }
  throw UnsupportedCombination("rhs: unknown frame");
}

Derivative rhs(const ProfileState& s) {
  return rhs(s.kind, s.frame, s.params, s.coord, s.value, s.slope, PowerPolicy::strict);
}

namespace {

// Every frame is converted through the scaled frame (r, v, v', v'').
Jet to_scaled(const Jet& j, Frame from, const Params& k) {
  switch (from) {
    case Frame::scaled_v: return j;
    case Frame::physical_w: {
      const double r = j.coord;
      require_radius(r);
      const double a = k.alpha;
      const double ra = std::pow(r, a);
      Jet out;
      out.coord = r;
      out.value = ra * j.value;
      out.slope = ra * (j.slope + a * j.value / r);
      out.curvature = ra * (j.curvature + 2.0 * a * j.slope / r + a * (a - 1.0) * j.value / (r * r));
      return out;
    }
    case Frame::normalized_h: {
      require_radius(j.coord);
      const double L = k.L();
      return Jet{j.coord, L * j.value, L * j.slope, L * j.curvature};
    }
    case Frame::log_phase: {
      const double r = std::exp(j.coord);
      Jet out;
      out.coord = r;
      out.value = j.value;
      out.slope = j.slope / r;
      out.curvature = (j.curvature - j.slope) / (r * r);
      return out;
    }
  }
  throw UnsupportedCombination("transform: unknown frame");
}

Jet from_scaled(const Jet& j, Frame to, const Params& k) {
  switch (to) {
    case Frame::scaled_v: return j;
    case Frame::physical_w: {
      const double r = j.coord;
      const double a = k.alpha;
      const double ra = std::pow(r, -a);
      Jet out;
      out.coord = r;
      out.value = ra * j.value;
      out.slope = ra * (j.slope - a * j.value / r);
      out.curvature = ra * (j.curvature - 2.0 * a * j.slope / r + a * (a + 1.0) * j.value / (r * r));
      return out;
    }
    case Frame::normalized_h: {
      const double L = k.L();
      return Jet{j.coord, j.value / L, j.slope / L, j.curvature / L};
    }
    case Frame::log_phase: {
      const double r = j.coord;
      Jet out;
      out.coord = std::log(r);
      out.value = j.value;
      out.slope = r * j.slope;
      out.curvature = r * r * j.curvature + r * j.slope;
      return out;
    }
  }
  throw UnsupportedCombination("transform: unknown frame");
}

}  // namespace

Jet transform_jet(const Jet& jet, Frame from, Frame to, const Params& params) {
  if (from == to) return jet;
  if (from == Frame::normalized_h || to == Frame::normalized_h) (void)params.L();
  return from_scaled(to_scaled(jet, from, params), to, params);
}

ProfileState transform_state(const ProfileState& state, Frame target) {
  const Jet j = transform_jet(Jet{state.coord, state.value, state.slope, 0.0}, state.frame, target,
                              state.params);
  ProfileState out = state;
  out.coord = j.coord;
  out.value = j.value;
  out.slope = j.slope;
  out.frame = target;
  return out;
}

Jet u_star(const Params& k, double r) {
  require_radius(r);
  const double L = k.L();
  const double a = k.alpha;
  const double value = L * std::pow(r, -a);
  return Jet{r, value, -a * value / r, a * (a + 1.0) * value / (r * r)};
}

namespace {

void require_nonnegative(double xi, const char* what) {
  if (!(xi >= 0.0)) throw DomainError(std::string(what) + ": argument must be nonnegative");
}

}  // namespace

double potential_d(const Params& k, double xi) {
  require_nonnegative(xi, "d");
  return k.alpha * k.alpha * (std::pow(xi, k.p) - xi);
}

double potential_b(const Params& k, double xi) {
  require_nonnegative(xi, "b");
  return k.alpha * k.alpha * (std::pow(xi, k.p + 1.0) / (k.p + 1.0) - 0.5 * xi * xi);
}

double potential_a(const Params& k, double xi) {
  require_nonnegative(xi, "a");
  return std::pow(xi, k.p + 1.0) / (k.p + 1.0) - 0.5 * k.gamma * xi * xi;
}

double remainder_f(const Params& k, double u) {
  const double L = k.L();
  if (!(L + u > 0.0)) throw DomainError("f: requires L + u > 0");
  const double t = u / L;
  const double Lp = std::pow(L, k.p);
  if (std::abs(t) < 1e-3) {
    // sum_{j>=2} binom(p, j) t^j; |t| < 1e-3 makes ten terms ample.
    double coeff = k.p;
    double tj = t;
    double sum = 0.0;
    for (int j = 2; j <= 12; ++j) {
      coeff *= (k.p - (j - 1)) / j;
      tj *= t;
      sum += coeff * tj;
    }
    return Lp * sum;
  }
  return Lp * (std::expm1(k.p * std::log1p(t)) - k.p * t);
}

double remainder_f_as_printed(const Params& k, double v) {
  const double L = k.L();
  if (!(L + v > 0.0)) throw DomainError("f: requires L + v > 0");
  return std::pow(L + v, k.p) - std::pow(L, k.p) - k.p * std::pow(L, k.p - 1.0) * v;
}

ScalarKit scalar_kit(const Params& k, double xi) {
  ScalarKit kit;
  kit.d = potential_d(k, xi);
  kit.b = potential_b(k, xi);
  kit.a = potential_a(k, xi);
  if (k.has_L() && *k.amplitude + xi > 0.0) kit.f = remainder_f(k, xi);
  return kit;
}

}  // namespace selfsim
