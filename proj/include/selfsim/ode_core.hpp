#pragma once

#include <optional>
#include <string_view>

#include "selfsim/exponents.hpp"

namespace selfsim {

/// Which ODE a state belongs to.
///   forward_profile:  w'' + ((n-1)/r + r/2) w' + w/(p-1) + w^p = 0
///   backward_profile: w'' + ((n-1)/r - r/2) w' - w/(p-1) + w^p = 0
///   steady:           U'' + (n-1)/r U' + U^p = 0
enum class EquationKind { forward_profile, backward_profile, steady };

/// Which dependent/independent variable pair a state is expressed in.
///   physical_w:   w(r)
///   scaled_v:     v(r) = r^alpha w(r)
///   normalized_h: h(r) = v(r)/L
///   log_phase:    v(s), s = log r (autonomous only for the steady kind)
enum class Frame { physical_w, scaled_v, normalized_h, log_phase };

std::string_view to_string(EquationKind kind);
std::string_view to_string(Frame frame);
/// Accepts the to_string spellings plus the short CLI forms
/// forward/backward/steady and w/v/h/log. Throws InvalidArgument otherwise.
EquationKind parse_kind(std::string_view text);
Frame parse_frame(std::string_view text);

/// Sign of the r/2 drift term: +1 forward, -1 backward, 0 steady.
int drift_sign(EquationKind kind);

struct ProfileState {
  double coord = 0.0;  // r, or s = log r in the log_phase frame
  double value = 0.0;
  double slope = 0.0;  // derivative with respect to coord
  Frame frame = Frame::physical_w;
  EquationKind kind = EquationKind::steady;
  Params params;
};

struct Derivative {
  double dvalue = 0.0;
  double dslope = 0.0;
};

/// How x^(p-1) is evaluated for x < 0 with non-integer p. `strict` raises
/// DomainError. `odd_extension` uses |x|^(p-1), which makes the reaction
/// terms odd in x; the integrator evaluates its stages with it and
/// terminates at the first zero crossing.
enum class PowerPolicy { strict, odd_extension };

/// x^e for the factor x^(p-1) of the reaction terms.
double reaction_power(double x, double e, PowerPolicy policy = PowerPolicy::strict);

/// First-order system for the state's frame/kind pair. The reaction terms
/// are written as multiples of ((x/x_eq)^(p-1) - 1), so the equilibria
/// w = kappa (backward), v = L and h = 1 give an exactly zero derivative.
Derivative rhs(const ProfileState& state);
Derivative rhs(EquationKind kind, Frame frame, const Params& params, double coord, double value,
               double slope, PowerPolicy policy = PowerPolicy::strict);

/// Exact change of variables through v = r^alpha w, h = v/L, s = log r.
ProfileState transform_state(const ProfileState& state, Frame target);

/// Value, first and second derivative of a function at one coordinate.
struct Jet {
  double coord = 0.0;
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;
};

/// Same as transform_state but also carries the second derivative.
Jet transform_jet(const Jet& jet, Frame from, Frame to, const Params& params);

/// U_*(r) = L r^{-alpha} with its first two derivatives. Requires p > p_sg.
Jet u_star(const Params& params, double r);

/// d(xi) = alpha^2 (xi^p - xi)
double potential_d(const Params& params, double xi);
/// b(xi) = alpha^2 (xi^{p+1}/(p+1) - xi^2/2); b' = d.
double potential_b(const Params& params, double xi);
/// a(xi) = xi^{p+1}/(p+1) - gamma xi^2/2; a'(xi) = xi^p - gamma xi.
double potential_a(const Params& params, double xi);

/// Quadratic remainder f(u) = (L+u)^p - L^p - p L^{p-1} u, u = v - L.
/// Uses the closed form, switching to the binomial series for |u/L| < 1e-3
/// where the closed form loses digits to cancellation. Requires L + u > 0.
double remainder_f(const Params& params, double u);

/// The remainder with v in place of u, i.e. (L+v)^p - L^p - p L^{p-1} v.
/// Kept for comparison: it is not O(u^2) around v = L, so it is not the
/// remainder of the linearization about U_*.
double remainder_f_as_printed(const Params& params, double v);

struct ScalarKit {
  double d = 0.0;
  double b = 0.0;
  double a = 0.0;
  std::optional<double> f;  // present when L is defined and L + xi > 0
};

ScalarKit scalar_kit(const Params& params, double xi);

}  // namespace selfsim
