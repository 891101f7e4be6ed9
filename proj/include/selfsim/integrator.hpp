#pragma once

#include <optional>
#include <vector>

#include "selfsim/trajectory.hpp"

namespace selfsim {

/// Adaptive Dormand-Prince 5(4) integration of the state's frame/kind system
/// from `initial.coord` to `options.r_end`, with dense output at log-spaced
/// radii (uniform in s for the log_phase frame) and curvature taken from the
/// derivative of the continuous extension.
///
/// Terminal events (floor, ceiling, departure) are localized on the
/// continuous extension by bisection to rel_tol in the coordinate; the
/// event point becomes the last sample. Step-size underflow and budget
/// exhaustion stop the run with the last good state as final sample.
Trajectory integrate(const ProfileState& initial, const IntegrationOptions& options);

/// Taylor coefficients of the regular solution w = a + c r^2 + d r^4 + ...
struct SeriesCoefficients {
  double c = 0.0;
  double d = 0.0;
};

/// Requires a > 0.
SeriesCoefficients series_coefficients(EquationKind kind, const Params& params, double a);

/// Physical-frame state at r = eps of the regular solution with w(0) = a:
/// w = a + c eps^2, w' = 2 c eps. Throws InvalidArgument for a <= 0 or
/// eps <= 0.
ProfileState series_start(EquationKind kind, const Params& params, double a, double eps);

/// Halves eps (starting at eps0) until the next-order term is below rel_tol
/// relative to both the value and the slope of the quadratic start.
double auto_start_radius(EquationKind kind, const Params& params, double a, double rel_tol,
                         double eps0 = 1e-4);

/// Scaled-frame state at r = eps on the linearized mode r^mu about U_*:
/// v = L + delta, v' = mu delta / eps. root_index 1 picks the root with the
/// larger real part. Throws ComplexRootError when the roots are complex and
/// delta != 0.
ProfileState singular_start(EquationKind kind, const Params& params, double delta, int root_index, double eps);

/// Scaled-frame state on the oscillatory pair sigma +- i omega:
/// v - L = A (r/eps)^sigma cos(omega log(r/eps) + phase), evaluated at eps.
/// Throws InvalidArgument when the roots are real.
ProfileState spiral_start(EquationKind kind, const Params& params, double amplitude, double phase, double eps);

/// c(r) = r^2 h'^2/2 + gamma B(h),  B(h) = h^{p+1}/(p+1) - h^2/2,
/// I(r) = int_{r0}^r h'^2 rho^3 d rho,  J(r) = int_{r0}^r h'^2 rho d rho.
///
/// Multiplying the normalized equation by r^2 h' gives, for general p,
///   c(r) - c(r0) + beta J(r) + sigma I(r)/2 = 0,
/// with sigma = +1 for the forward and -1 for the backward equation. At
/// p = p_S, gamma = alpha^2 and beta = 0, which is the classical form with
/// b(h) = alpha^2 B(h).
struct EnergyLedger {
  struct Entry {
    double r = 0.0;
    double c = 0.0;
    double I = 0.0;
    double J = 0.0;
    double residual = 0.0;  // c - c(r0) + beta J + sigma I/2
  };
  std::vector<Entry> entries;
  EquationKind kind = EquationKind::forward_profile;
  double beta = 0.0;
  int sigma = 1;
  double residual = 0.0;        // max |entry.residual|
  double scale = 0.0;           // max of |c|, I/2, |beta| J over the ledger
  double relative_residual = 0.0;
  /// Largest step of c against the kind's expected direction (c
  /// nonincreasing for forward, nondecreasing for backward); zero means
  /// monotone.
  double c_monotonicity_violation = 0.0;
  /// Same for c + beta J, which the identity makes monotone for every p.
  double corrected_monotonicity_violation = 0.0;
};

/// Requires a normalized_h trajectory of the forward or backward kind, with
/// curvature. Throws InvalidArgument on a frame or kind mismatch.
EnergyLedger energy_ledger(const Trajectory& traj);

/// Terms of the identity obtained by multiplying the scaled equation by
/// v' r^2 and integrating over [rho, R]:
///   [r^2 v'^2/2 + A(v)] + beta int v'^2 r + sigma/2 int v'^2 r^3 = 0,
///   A(v) = v^{p+1}/(p+1) - gamma v^2/2,
/// sigma = +1 forward, -1 backward (the r/2 drift changes sign), 0 steady.
struct PohozaevReport {
  double rho = 0.0;
  double R = 0.0;
  double kinetic_jump = 0.0;    // [r^2 v'^2/2]
  double potential_jump = 0.0;  // [A(v)]
  double linear_term = 0.0;     // beta int v'^2 r
  double cubic_term = 0.0;      // sigma/2 int v'^2 r^3
  double residual = 0.0;        // sum of the four
  double scale = 0.0;           // largest |term|
  double relative_residual = 0.0;
  double energy_integral = 0.0;  // int_rho^R v'^2 r dr
};

/// Requires a scaled_v trajectory and rho < R inside its span.
PohozaevReport pohozaev_check(const Trajectory& traj, double rho, double R);

}  // namespace selfsim
