#include "selfsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "selfsim/diagnostics.hpp"
#include "selfsim/errors.hpp"
#include "selfsim/exponents.hpp"
#include "selfsim/format.hpp"
#include "selfsim/integrator.hpp"
#include "selfsim/shooting.hpp"
#include "selfsim/trajectory_io.hpp"

namespace selfsim {

namespace {

Check at_most(std::string name, double value, double threshold) {
  return Check{std::move(name), value, threshold, std::isfinite(value) && value <= threshold};
}
Check below(std::string name, double value, double threshold) {
  return Check{std::move(name), value, threshold, std::isfinite(value) && value < threshold};
}
Check holds(std::string name, bool ok) { return Check{std::move(name), ok ? 1.0 : 0.0, 1.0, ok}; }

double rel_err(double a, double b, double floor = 0.0) {
  const double s = std::max({std::abs(a), std::abs(b), floor});
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}


// ---------------------------------------------------------------- C1

CriterionResult exponent_closed_forms() {
  CriterionResult res{1, "exponent closed forms", {}, {}};
  for (double n : {3.0, 11.0, 15.0}) {
    const ExponentTable t = exponent_table(n);
    const long double N = n;
    const std::string tag = "n=" + shortest(n) + " ";
    auto compare = [&](const char* name, const Exponent& e, bool finite, long double ref) {
      if (!finite) {
        res.checks.push_back(holds(tag + name + " unbounded", !e.is_finite()));
        return;
      }
      const double err = e.is_finite() ? static_cast<double>(std::fabs((e.value() - ref) / ref)) : INFINITY;
      res.checks.push_back(at_most(tag + name, err, 1e-12));
    };
    compare("p_F", t.fujita, true, 1.0L + 2.0L / N);
    compare("p_sg", t.singular, true, N / (N - 2.0L));
    compare("p_S", t.sobolev, true, (N + 2.0L) / (N - 2.0L));
    compare("p_JL", t.joseph_lundgren, n > 10, 1.0L + 4.0L / (N - 4.0L - 2.0L * std::sqrt(N - 1.0L)));
    compare("p_JL*", t.joseph_lundgren_dual, true, 1.0L + 4.0L / (N - 4.0L + 2.0L * std::sqrt(N - 1.0L)));
    compare("p_L", t.lepin, n > 10, (N - 4.0L) / (N - 10.0L));
    res.checks.push_back(holds(tag + "p_F < p_sg < p_S < p_JL",
                               t.fujita < t.singular && t.singular < t.sobolev && t.sobolev < t.joseph_lundgren));
    res.checks.push_back(
        holds(tag + "p_sg < p_JL* < p_S", t.singular < t.joseph_lundgren_dual && t.joseph_lundgren_dual < t.sobolev));
  }
  const ExponentTable t11 = exponent_table(11.0);
  res.checks.push_back(holds("n=11 p_JL < p_L", t11.joseph_lundgren < t11.lepin));
  // 1 + 4/(7 - 2 sqrt(10)) evaluated to 30 digits.
  constexpr double p_jl_11 = 6.92202458681633718;
  res.checks.push_back(at_most("n=11 |p_JL - 6.9220245868|", std::abs(t11.joseph_lundgren.value() - p_jl_11), 1e-12));
  res.details["printed_p_JL_11"] = 6.922019;
  res.details["printed_p_JL_11_gap"] = std::abs(p_jl_11 - 6.922019);
  res.checks.push_back(at_most("n=11 |p_L - 7|", std::abs(t11.lepin.value() - 7.0), 1e-12));
  return res;
}

// ---------------------------------------------------------------- C2

CriterionResult algebraic_identities() {
  CriterionResult res{2, "algebraic identities on a 500-point grid", {}, {}};
  double e_beta = 0, e_gamma = 0, e_const = 0;
  int points = 0;
  for (int i = 0; i < 20; ++i) {
    const double n = 3.0 + 0.85 * i;  // 3 .. 19.15
    const double p_sg = n / (n - 2.0);
    for (int j = 0; j < 25; ++j) {
      const double p = p_sg * (1.0 + 0.01) + 0.4 * j;
      const Params k = derived_constants(n, p);
      e_beta = std::max(e_beta, rel_err(k.beta, n - 2.0 - 2.0 * k.alpha, 1.0));
      e_gamma = std::max(e_gamma, rel_err(k.gamma, std::pow(k.L(), p - 1.0)));
      const IndicialRoots r = indicial_roots(n, p);
      e_const = std::max(e_const, rel_err((r.first * r.second).real(), (p - 1.0) * k.gamma));
      ++points;
    }
  }
  res.details["points"] = points;
  res.checks.push_back(at_most("beta = n-2-2alpha", e_beta, 1e-12));
  res.checks.push_back(at_most("gamma = L^(p-1)", e_gamma, 1e-12));
  res.checks.push_back(at_most("indicial constant = (p-1)gamma", e_const, 1e-12));
  return res;
}

// ---------------------------------------------------------------- C3

CriterionResult exact_solution_residuals() {
  CriterionResult res{3, "exact-solution residuals", {}, {}};
  for (auto [n, p] : {std::pair{11.0, 7.0}, std::pair{3.0, 5.0}}) {
    const Params k = derived_constants(n, p);
    for (auto kind : {EquationKind::steady, EquationKind::forward_profile, EquationKind::backward_profile}) {
      for (auto frame : {Frame::physical_w, Frame::scaled_v}) {
        const Trajectory u = sample_u_star(k, kind, frame, 0.01, 100.0, 801);
        res.checks.push_back(below("U_* n=" + shortest(n) + " p=" + shortest(p) + " " + std::string(to_string(kind)) +
                                       " " + std::string(to_string(frame)),
                                   residual_of(u), 1e-9));
      }
    }
    const Trajectory c = sample_constant(k, EquationKind::backward_profile, k.kappa, 0.01, 100.0, 801);
    res.checks.push_back(below("kappa n=" + shortest(n) + " p=" + shortest(p), residual_of(c), 1e-12));
  }
  return res;
}

// ---------------------------------------------------------------- C4

CriterionResult indicial_checks() {
  CriterionResult res{4, "indicial roots", {}, {}};
  const IndicialRoots r = indicial_roots(11.0, 7.0);
  res.checks.push_back(holds("n=11 p=7 roots real", r.is_real()));
  res.checks.push_back(at_most("mu_1 = -4", std::abs(r.first - std::complex<double>(-4.0, 0.0)), 1e-10));
  res.checks.push_back(at_most("mu_2 = -13/3", std::abs(r.second - std::complex<double>(-13.0 / 3.0, 0.0)), 1e-10));

  // The discriminant is negative at p = 3 (complex pair) and positive at p = 7.
  double lo = 3.0, hi = 7.0;
  const double f_lo = indicial_discriminant(11.0, lo);
  const double f_hi = indicial_discriminant(11.0, hi);
  res.checks.push_back(holds("discriminant changes sign on [3, 7]", f_lo < 0.0 && f_hi > 0.0));
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (indicial_discriminant(11.0, mid) < 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  res.details["discriminant_zero"] = root;
  res.checks.push_back(at_most("discriminant zero = p_JL(11)", std::abs(root - exponent_table(11.0).joseph_lundgren.value()), 1e-6));
  return res;
}

// ---------------------------------------------------------------- C5

ProfileCandidate backward_candidate(const ShotOptions& o, nlohmann::json* details) {
  const Params k = derived_constants(11.0, 2.0);
  std::vector<double> grid = log_grid(1.5, 100.0, 24);
  const SweepResult s = sweep(EquationKind::backward_profile, k, grid, o, 1);
  for (const auto& [i, j] : s.brackets) {
    const auto& lo = s.grid[i];
    const auto& hi = s.grid[j];
    if (lo.a > k.kappa && lo.classification.tag == ShotTag::hits_zero && hi.classification.tag == ShotTag::blowup) {
      const BoundaryResult b = bisect_boundary(EquationKind::backward_profile, k, lo.a, hi.a, o, 1e-10);
      if (details) {
        (*details)["bracket"] = {lo.a, hi.a};
        (*details)["a_star"] = b.a_star;
        (*details)["bisection_iterations"] = b.iterations;
      }
      return boundary_profile(EquationKind::backward_profile, k, b, o);
    }
  }
  throw BracketError("no HitsZero/Blowup bracket above kappa on the sweep grid");
}

CriterionResult energy_identities() {
  CriterionResult res{5, "energy identities", {}, {}};
  const Params k = derived_constants(3.0, 5.0);
  const ShotOptions fo = default_shot_options(EquationKind::forward_profile);
  for (double a : {0.5, 1.0, 2.0}) {
    const Shot s = shoot(EquationKind::forward_profile, k, a, fo);
    const EnergyLedger led = energy_ledger(transform_trajectory(s.trajectory, Frame::normalized_h));
    const std::string tag = "forward n=3 p=5 a=" + shortest(a) + " ";
    res.checks.push_back(below(tag + "identity relative residual", led.relative_residual, 1e-6));
    res.checks.push_back(at_most(tag + "c nonincreasing (max rise / scale)", led.c_monotonicity_violation / led.scale, 1e-10));
  }

  nlohmann::json bd;
  const ProfileCandidate cand = backward_candidate(default_shot_options(EquationKind::backward_profile), &bd);
  const EnergyLedger led = energy_ledger(transform_trajectory(cand.trajectory, Frame::normalized_h));
  res.checks.push_back(below("backward n=11 p=2 identity relative residual", led.relative_residual, 1e-6));
  res.checks.push_back(
      at_most("backward n=11 p=2 c nondecreasing (max drop / scale)", led.c_monotonicity_violation / led.scale, 1e-10));
  bd["beta"] = led.beta;
  bd["reliable_radius"] = cand.reliable_radius;
  bd["corrected_energy_violation"] = led.corrected_monotonicity_violation / led.scale;
  bd["note"] =
      "c' = r h'^2 (r^2/2 - beta) on backward solutions, so with beta = 5 the literal c decreases on r < sqrt(2 beta); "
      "c + beta J is nondecreasing and reported alongside";
  res.details["backward"] = bd;
  return res;
}

// ---------------------------------------------------------------- C6

CriterionResult pohozaev_identity() {
  CriterionResult res{6, "Pohozaev identity", {}, {}};
  const Params k = derived_constants(11.0, 5.0);
  ShotOptions o = default_shot_options(EquationKind::forward_profile);
  for (double a : {0.5, 1.0, 2.0}) {
    const Shot s = shoot(EquationKind::forward_profile, k, a, o);
    const std::string tag = "n=11 p=5 a=" + shortest(a) + " ";
    res.checks.push_back(holds(tag + "positive decaying", s.classification.tag == ShotTag::positive_decaying));
    const Trajectory v = transform_trajectory(s.trajectory, Frame::scaled_v);
    const PohozaevReport half = pohozaev_check(v, v.coord_min(), 0.5 * v.coord_max());
    const PohozaevReport full = pohozaev_check(v, v.coord_min(), v.coord_max());
    res.checks.push_back(below(tag + "relative residual", full.relative_residual, 1e-6));
    res.checks.push_back(below(tag + "int v'^2 r drift under span doubling",
                               rel_err(full.energy_integral, half.energy_integral), 1e-3));
  }
  return res;
}

// ---------------------------------------------------------------- C7

CriterionResult regular_profile_bounds() {
  CriterionResult res{7, "regular forward profile bounds", {}, {}};
  int profiles = 0;
  for (double n : {3.0, 11.0}) {
    const Params k = derived_constants(n, 5.0);
    for (double a : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      ShotOptions o = default_shot_options(EquationKind::forward_profile);
      o.start_radius = 1e-4;
      const Shot coarse = shoot(EquationKind::forward_profile, k, a, o);
      o.start_radius = 5e-5;
      const Shot fine = shoot(EquationKind::forward_profile, k, a, o);
      const std::string tag = "n=" + shortest(n) + " a=" + shortest(a) + " ";
      const MonotonicityReport m = monotonicity_report(fine.trajectory);
      res.checks.push_back(at_most(tag + "max w'/scale", m.max_slope / m.scale, 1e-12));
      const GrowthBoundReport g1 = growth_bound_report(coarse.trajectory);
      const GrowthBoundReport g2 = growth_bound_report(fine.trajectory);
      res.checks.push_back(holds(tag + "growth suprema stable under r_min halving", g1.finite && g2.finite && suprema_stable(g1, g2)));
      // |w'|/r near the origin against its series limit 2|c|.
      const double limit = 2.0 * std::abs(series_coefficients(EquationKind::forward_profile, k, a).c);
      double near = 0.0;
      for (const auto& s : fine.trajectory.samples())
        if (s.coord <= 1e-3) near = std::max(near, std::abs(s.slope) / s.coord);
      res.checks.push_back(below(tag + "sup_{r<=1e-3} |w'|/r over 2|c|", near / limit, 2.0));
      ++profiles;
    }
  }
  res.details["profiles"] = profiles;
  return res;
}

// ---------------------------------------------------------------- C8

CriterionResult intersection_dichotomy() {
  CriterionResult res{8, "intersection dichotomy", {}, {}};
  for (double n : {11.0, 15.0}) {
    const Params k = derived_constants(n, 3.0);
    ShotOptions o = default_shot_options(EquationKind::steady);
    o.start_radius = 1e-5;
    o.integration.r_end = 2e4;
    const Shot s = shoot(EquationKind::steady, k, 1.0, o);
    const std::string tag = "n=" + shortest(n) + " p=3 ";
    res.checks.push_back(below(tag + "steady residual", residual_of(s.trajectory), 1e-6));
    const Trajectory v = transform_trajectory(s.trajectory, Frame::scaled_v);
    const Trajectory v2 = scaling_family(v, 2.0);
    const double lo = std::exp(-8.0), hi = std::exp(8.0);
    const SignChangeReport z = intersection_count(v.restricted(lo, hi), v2.restricted(lo, hi));
    res.details[tag + "count"] = z.count;
    if (exponent_table(n).joseph_lundgren > 3.0)
      res.checks.push_back(Check{tag + "intersections >= 1", static_cast<double>(z.count), 1.0, z.count >= 1});
    else
      res.checks.push_back(Check{tag + "intersections = 0", static_cast<double>(z.count), 0.0, z.count == 0});
  }
  return res;
}

// ---------------------------------------------------------------- C9

CriterionResult backward_profile_search() {
  CriterionResult res{9, "backward nonconstant profile", {}, {}};
  ShotOptions o = default_shot_options(EquationKind::backward_profile);
  const ProfileCandidate c = backward_candidate(o, &res.details);
  res.details["reliable_radius"] = c.reliable_radius;
  res.checks.push_back(holds("candidate positive decaying", c.tag == ShotTag::positive_decaying));
  res.checks.push_back(holds("candidate nonconstant", c.nonconstant));
  res.checks.push_back(below("residual", residual_of(c.trajectory), 1e-6));
  const UpperBoundReport u = upper_bound_constant(c.trajectory);

  o.integration.rel_tol = 1e-12;
  o.integration.abs_tol = 1e-13;
  const ProfileCandidate fine = backward_candidate(o, nullptr);
  const UpperBoundReport uf = upper_bound_constant(fine.trajectory);
  res.details["C"] = u.C;
  res.details["C_refined"] = uf.C;
  res.checks.push_back(below("C drift under tolerance refinement", rel_err(u.C, uf.C), 1e-3));
  return res;
}

// ---------------------------------------------------------------- C10

CriterionResult uniqueness() {
  CriterionResult res{10, "uniqueness probe", {}, {}};
  const Params k = derived_constants(11.0, 7.0);
  const ProbeReport rep = uniqueness_probe(k, {1e-3, -1e-3, 1e-4, -1e-4, 1e-5, -1e-5}, ProbeOptions{});
  res.details = probe_summary(rep);
  res.details["note"] =
      "failed-refutation check: no sampled perturbation of U_* stays near L on both sides; this does not prove "
      "uniqueness";
  res.checks.push_back(Check{"both-sided survivors", static_cast<double>(rep.survivors), 0.0, rep.survivors == 0});
  res.checks.push_back(Check{"inconclusive runs", static_cast<double>(rep.inconclusive), 0.0, rep.inconclusive == 0});
  const double slope = rep.exit_slope.value_or(NAN);
  res.checks.push_back(below("exit slope relative error vs 1/|mu_1|", std::abs(slope - rep.predicted_slope) / rep.predicted_slope, 0.15));
  return res;
}

}  // namespace

bool CriterionResult::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json CriterionResult::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  return {{"id", id}, {"title", title}, {"pass", pass()}, {"checks", cs}, {"details", details}};
}

bool SuiteReport::pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass(); });
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : criteria) cs.push_back(c.to_json());
  return {{"suite", suite}, {"pass", pass()}, {"criteria", cs}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "exponents", "lemma21", "dichotomy", "uniqueness-probe", "all"};
  return names;
}

std::vector<int> suite_criteria(std::string_view suite) {
  static const std::map<std::string, std::vector<int>, std::less<>> table{
      {"exponents", {1, 2, 4}},  {"identities", {3, 5, 6}}, {"lemma21", {7}},
      {"dichotomy", {8, 9}},     {"uniqueness-probe", {10}}, {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}};
  const auto it = table.find(suite);
  if (it == table.end()) throw InvalidArgument("unknown suite '" + std::string(suite) + "'");
  return it->second;
}

CriterionResult run_criterion(int id) {
  if (id < 1 || id > 10) throw InvalidArgument("criterion id must lie in 1..10");
  CriterionResult r;
  try {
    switch (id) {
      case 1: return exponent_closed_forms();
      case 2: return algebraic_identities();
      case 3: return exact_solution_residuals();
      case 4: return indicial_checks();
      case 5: return energy_identities();
      case 6: return pohozaev_identity();
      case 7: return regular_profile_bounds();
      case 8: return intersection_dichotomy();
      case 9: return backward_profile_search();
      case 10: return uniqueness();
    }
  } catch (const Error& e) {
    r.id = id;
    r.title = "criterion " + std::to_string(id);
    r.checks.push_back(Check{"completed without error", 0.0, 1.0, false});
    r.details["error"] = e.what();
  }
  return r;
}

SuiteReport run_suite(std::string_view suite) {
  SuiteReport rep{std::string(suite), {}};
  for (int id : suite_criteria(suite)) rep.criteria.push_back(run_criterion(id));
  return rep;
}

}  // namespace selfsim
