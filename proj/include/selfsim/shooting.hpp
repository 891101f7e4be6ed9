#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selfsim/integrator.hpp"

namespace selfsim {

enum class ShotTag { positive_decaying, hits_zero, blowup, undetermined };

std::string_view to_string(ShotTag tag);

/// l(w) = lim r^alpha w(r) estimated from the tail of a forward profile.
struct EllEstimate {
  double value = 0.0;
  bool converged = false;
  std::array<double, 3> radii{};
  std::array<double, 3> raw{};  // r^alpha w at the three radii
};

struct ShotClassification {
  ShotTag tag = ShotTag::undetermined;
  std::optional<double> radius;  // event radius for hits_zero / blowup
  ProfileState terminal;
  std::optional<EllEstimate> ell;
  /// The shot is the constant solution (backward kind, a = kappa); l is not
  /// defined for it.
  bool constant_profile = false;
};

struct Shot {
  ShotClassification classification;
  Trajectory trajectory;
};

struct ShotOptions {
  IntegrationOptions integration;
  /// Start radius for the series start. When unset, auto_start_radius with
  /// eps0 = 1e-4 and the integration rel_tol picks it.
  std::optional<double> start_radius;
};

/// Default shot options for a kind: forward shots run to r = 100 (the l
/// estimate needs r_end >= 50); backward shots enable departure detection
/// and run to r = 20; steady shots run to r = 1e4.
ShotOptions default_shot_options(EquationKind kind);

/// Integrates the regular solution w(0) = a outward and tags it:
/// hits_zero on a floor event, blowup on a ceiling or departure event,
/// undetermined on step underflow or budget exhaustion, positive_decaying
/// otherwise. Forward positive shots carry an l estimate.
Shot shoot(EquationKind kind, const Params& params, double a, const ShotOptions& options);
ShotClassification classify_shot(EquationKind kind, const Params& params, double a, const ShotOptions& options);

/// l from the values v = r^alpha w at r_end/2, r_end/sqrt(2), r_end using
/// Aitken's delta-squared extrapolation (exact for v = l + A r^{-m}). The
/// estimate is flagged converged when the three raw values agree to 1e-4
/// relative. Requires a physical-frame trajectory reaching r >= 50.
EllEstimate estimate_ell(const Trajectory& traj);

struct BoundaryResult {
  double a_star = 0.0;
  double a_lo = 0.0;
  double a_hi = 0.0;
  ShotTag tag_lo = ShotTag::undetermined;
  ShotTag tag_hi = ShotTag::undetermined;
  int iterations = 0;
  /// Midpoints that came back undetermined and were replaced by a nudged
  /// probe point.
  std::vector<double> undetermined_probes;
};

using Classifier = std::function<ShotTag(double)>;

/// Midpoint bisection on a classifier until the bracket width is below
/// rel_width * max(1, a*). Deterministic. Throws BracketError when both
/// ends share a tag (or either end is undetermined).
BoundaryResult bisect_boundary(const Classifier& classify, double a_lo, double a_hi, double rel_width = 1e-10);

BoundaryResult bisect_boundary(EquationKind kind, const Params& params, double a_lo, double a_hi,
                               const ShotOptions& options, double rel_width = 1e-10);

/// Profile reconstructed at a bisected boundary. The shots at both bracket
/// ends agree up to `reliable_radius` (relative separation below
/// `separation_tol`); the candidate is the a* trajectory restricted to that
/// radius.
struct ProfileCandidate {
  BoundaryResult boundary;
  Trajectory trajectory;
  double reliable_radius = 0.0;
  ShotTag tag = ShotTag::undetermined;  // positive_decaying when the restricted shot stays positive
  bool nonconstant = false;             // |a* - kappa| > 1e-3 kappa for the backward kind
};

ProfileCandidate boundary_profile(EquationKind kind, const Params& params, const BoundaryResult& boundary,
                                  const ShotOptions& options, double separation_tol = 1e-3);

struct SweepEntry {
  double a = 0.0;
  ShotClassification classification;
};

struct SweepResult {
  std::vector<SweepEntry> grid;
  /// Adjacent grid pairs (index i, i+1) with differing tags.
  std::vector<std::pair<std::size_t, std::size_t>> brackets;
  /// Grid values removed as duplicates.
  std::vector<double> duplicates;
};

/// Classifies every grid value (sorted and deduplicated first) using up to
/// `threads` workers; the merge is by grid order, so results do not depend
/// on the thread count.
SweepResult sweep(EquationKind kind, const Params& params, std::vector<double> a_grid, const ShotOptions& options,
                  unsigned threads = 1);

struct LStarEstimate {
  double value = 0.0;       // max converged l; a lower bound for L*
  double attained_at = 0.0;
  std::size_t converged_count = 0;
  std::size_t excluded_count = 0;  // non-converged or non-positive shots
  std::vector<std::pair<double, EllEstimate>> estimates;
};

/// Forward kind only. Throws InsufficientData when no grid point yields a
/// converged estimate.
LStarEstimate estimate_L_star(const Params& params, std::vector<double> a_grid, const ShotOptions& options,
                              unsigned threads = 1);

/// Same reduction over precomputed estimates (exposed for testing).
LStarEstimate max_converged_ell(const std::vector<std::pair<double, EllEstimate>>& estimates);

struct ProbeEntry {
  double delta = 0.0;
  /// log(eps / r_exit) where |v - L| first reaches L/2 going inward; absent
  /// if the inward run stayed in the band down to r_inner.
  std::optional<double> inward_exit_log_distance;
  std::optional<double> outward_exit_radius;  // absent if it stayed in band to r_outer
  Termination inward_termination = Termination::span_end;
  Termination outward_termination = Termination::span_end;
  bool survivor = false;      // in band on both sides
  bool inconclusive = false;  // a side ended on underflow/budget
};

struct ProbeReport {
  std::vector<ProbeEntry> entries;
  std::size_t survivors = 0;
  std::size_t inconclusive = 0;
  /// Least-squares slope of the inward exit log-distance against |log delta|
  /// over conclusive nonzero deltas, and the linear prediction 1/|Re mu_1|.
  std::optional<double> exit_slope;
  double predicted_slope = 0.0;
  double eps = 0.0;
  double r_inner = 0.0;
  double r_outer = 0.0;
};

struct ProbeOptions {
  EquationKind kind = EquationKind::forward_profile;
  double eps = 1e-2;
  double r_inner = 1e-10;
  double r_outer = 100.0;
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  int root_index = 1;
  /// Spiral phase used when the indicial roots are complex.
  double phase = 0.0;
};

/// Perturbs U_* along one linearized mode at r = eps and integrates the
/// scaled equation inward and outward with band events at L/2 and 3L/2.
/// A second singular profile would show up as a survivor on both sides;
/// the report only records whether any sampled delta produced one.
/// Requires p > p_S.
ProbeReport uniqueness_probe(const Params& params, const std::vector<double>& delta_grid,
                             const ProbeOptions& options = {});

}  // namespace selfsim
