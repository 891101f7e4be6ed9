#include <doctest.h>

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/shooting.hpp"
#include "support.hpp"

using namespace selfsim;
using doctest::Approx;

namespace {
ShotOptions halved(ShotOptions o) {
  o.integration.rel_tol /= 2;
  o.integration.abs_tol /= 2;
  return o;
}
}  // namespace

TEST_SUITE("shooting") {
  TEST_CASE("backward constant profile") {
    for (double p : {2.0, 3.0, 5.0}) {
      const auto k = derived_constants(3, p);
      const auto s = shoot(EquationKind::backward_profile, k, k.kappa, default_shot_options(EquationKind::backward_profile));
      CHECK(s.classification.tag == ShotTag::positive_decaying);
      CHECK(s.classification.constant_profile);
      CHECK_FALSE(s.classification.ell.has_value());
      CHECK(residual_of(s.trajectory) < 1e-12);
    }
  }

  TEST_CASE("forward profile n=3 p=5 a=1") {
    const auto k = derived_constants(3, 5);
    const auto c = classify_shot(EquationKind::forward_profile, k, 1.0, default_shot_options(EquationKind::forward_profile));
    REQUIRE(c.tag == ShotTag::positive_decaying);
    REQUIRE(c.ell.has_value());
    CHECK(c.ell->converged);
    CHECK(c.ell->value > 0);
    CHECK_THROWS_AS(classify_shot(EquationKind::forward_profile, k, 0.0, {}), InvalidArgument);
  }

  TEST_CASE("backward n=3 p=5 away from kappa is not a profile, stably") {
    const auto k = derived_constants(3, 5);
    const auto o = default_shot_options(EquationKind::backward_profile);
    for (double m : {2.0, 5.0, 10.0, 20.0}) {
      const auto a = classify_shot(EquationKind::backward_profile, k, m * k.kappa, o);
      const auto b = classify_shot(EquationKind::backward_profile, k, m * k.kappa, halved(o));
      CAPTURE(m);
      CHECK(a.tag != ShotTag::positive_decaying);
      CHECK(a.tag != ShotTag::undetermined);
      CHECK(a.tag == b.tag);
      if (a.tag == ShotTag::hits_zero) CHECK(*a.radius <= o.integration.r_end);
    }
  }

  TEST_CASE("forward n=3 p=2 has one boundary on [0.1, 10]") {
    // Bounded positive solutions exist only below a threshold center value
    // when p < p_S, so large shots reach zero.
    const auto k = derived_constants(3, 2);
    const auto o = default_shot_options(EquationKind::forward_profile);
    const auto s = sweep(EquationKind::forward_profile, k, log_grid(0.1, 10, 12), o, 2);
    CHECK(s.grid.front().classification.tag == ShotTag::positive_decaying);
    CHECK(s.grid.back().classification.tag == ShotTag::hits_zero);
    CHECK(s.brackets.size() == 1);
    for (const auto& e : s.grid) CHECK(e.classification.tag == classify_shot(EquationKind::forward_profile, k, e.a, halved(o)).tag);
    const auto b = bisect_boundary(EquationKind::forward_profile, k, 1.0, 2.0, o, 1e-10);
    CHECK(b.a_star > 1.0);
    CHECK(b.a_star < 2.0);
    CHECK(b.a_hi - b.a_lo <= 1e-10 * std::max(1.0, b.a_star));
    CHECK_THROWS_AS(bisect_boundary(EquationKind::forward_profile, k, 0.1, 0.5, o, 1e-10), BracketError);
  }

  TEST_CASE("bisection on a planted step") {
    const double planted = 0.73710284;
    const Classifier step = [&](double a) { return a < planted ? ShotTag::hits_zero : ShotTag::blowup; };
    const auto b = bisect_boundary(step, 0.1, 3.0, 1e-10);
    CHECK(std::abs(b.a_star - planted) < 1e-10);
    CHECK(b.tag_lo == ShotTag::hits_zero);
    CHECK(bisect_boundary(step, 0.1, 3.0, 1e-10).a_star == b.a_star);
    CHECK_THROWS_AS(bisect_boundary(step, 1.0, 3.0, 1e-10), BracketError);
    CHECK_THROWS_AS(bisect_boundary(step, 3.0, 1.0, 1e-10), InvalidArgument);
  }

  TEST_CASE("bisection steps around undetermined probes") {
    const double planted = 1.3;
    int calls = 0;
    const Classifier flaky = [&](double a) {
      ++calls;
      if (a == 1.5) return ShotTag::undetermined;  // first midpoint of [1, 2]
      return a < planted ? ShotTag::hits_zero : ShotTag::blowup;
    };
    const auto b = bisect_boundary(flaky, 1.0, 2.0, 1e-10);
    CHECK(b.undetermined_probes.size() == 1);
    CHECK(std::abs(b.a_star - planted) < 1e-9);
    const Classifier dead = [](double a) { return a == 1.0 ? ShotTag::hits_zero : (a == 2.0 ? ShotTag::blowup : ShotTag::undetermined); };
    CHECK_THROWS_AS(bisect_boundary(dead, 1.0, 2.0, 1e-10), Error);
  }

  TEST_CASE("backward n=11 p=2 nonconstant profile candidate") {
    const auto k = derived_constants(11, 2);
    const auto o = default_shot_options(EquationKind::backward_profile);
    const auto b = bisect_boundary(EquationKind::backward_profile, k, 30, 50, o, 1e-10);
    CHECK(b.tag_lo == ShotTag::hits_zero);
    CHECK(b.tag_hi == ShotTag::blowup);
    CHECK(b.a_star == Approx(37.5565).epsilon(1e-4));
    const auto c = boundary_profile(EquationKind::backward_profile, k, b, o);
    CHECK(c.tag == ShotTag::positive_decaying);
    CHECK(c.nonconstant);
    CHECK(c.reliable_radius > 5);
    CHECK(residual_of(c.trajectory) < 1e-6);
    // Backward Pohozaev form on the same candidate.
    const auto v = transform_trajectory(c.trajectory, Frame::scaled_v);
    CHECK(pohozaev_check(v, v.coord_min(), v.coord_max()).relative_residual < 1e-6);
  }

  TEST_CASE("ell of exact and synthetic decays") {
    for (auto [n, p] : {std::pair{3.0, 5.0}, std::pair{11.0, 7.0}, std::pair{11.0, 3.0}, std::pair{5.0, 2.0}}) {
      const auto k = derived_constants(n, p);
      const auto u = sample_u_star(k, EquationKind::forward_profile, Frame::physical_w, 1, 100, 400);
      const auto e = estimate_ell(u);
      CHECK(e.converged);
      CHECK(e.value == Approx(k.L()).epsilon(1e-8));
    }
    const auto k = derived_constants(3, 5);
    const double L = k.L(), al = k.alpha;
    const auto syn = testing::sampled(
        k, EquationKind::forward_profile, log_grid(1, 100, 400),
        [&](double r) { return std::pow(r, -al) * (L + 1 / r); },
        [&](double r) { return -al * std::pow(r, -al - 1) * (L + 1 / r) - std::pow(r, -al - 2); },
        [&](double r) { return al * (al + 1) * std::pow(r, -al - 2) * (L + 1 / r) + (2 * al + 2) * std::pow(r, -al - 3); });
    CHECK(std::abs(estimate_ell(syn).value - L) < 1e-3);
    CHECK_THROWS_AS(estimate_ell(syn.restricted(1, 40)), InsufficientData);
  }

  TEST_CASE("L* estimate") {
    const auto k = derived_constants(3, 5);
    const auto o = default_shot_options(EquationKind::forward_profile);
    const std::vector<double> grid{0.25, 0.5, 1, 2, 4};
    const auto est = estimate_L_star(k, grid, o, 2);
    CHECK(est.value > 0);
    CHECK(std::isfinite(est.value));
    CHECK(est.converged_count == 5);
    for (const auto& [a, e] : est.estimates) CHECK(e.value <= est.value);
    std::vector<double> doubled = grid;
    for (double a : {0.35, 0.7, 1.4, 2.8}) doubled.push_back(a);
    CHECK(estimate_L_star(k, doubled, o, 2).value >= est.value);

    EllEstimate bad;
    bad.value = 99;
    bad.converged = false;
    EllEstimate good;
    good.value = 0.5;
    good.converged = true;
    const auto m = max_converged_ell({{1.0, bad}, {2.0, good}});
    CHECK(m.value == 0.5);
    CHECK(m.excluded_count == 1);
    CHECK_THROWS_AS(max_converged_ell({{1.0, bad}}), InsufficientData);
  }

  TEST_CASE("sweep merges deterministically") {
    const auto k = derived_constants(3, 2);
    const auto o = default_shot_options(EquationKind::forward_profile);
    const std::vector<double> grid{3, 0.5, 1, 0.5, 2, 0.2};
    const auto a = sweep(EquationKind::forward_profile, k, grid, o, 1);
    const auto b = sweep(EquationKind::forward_profile, k, grid, o, 4);
    REQUIRE(a.grid.size() == 5);
    CHECK(a.duplicates == std::vector<double>{0.5});
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
      if (i) CHECK(a.grid[i].a > a.grid[i - 1].a);
      CHECK(a.grid[i].a == b.grid[i].a);
      CHECK(a.grid[i].classification.tag == b.grid[i].classification.tag);
      CHECK(a.grid[i].classification.terminal.value == b.grid[i].classification.terminal.value);
    }
    CHECK(a.brackets == b.brackets);
    CHECK_THROWS_AS(sweep(EquationKind::forward_profile, k, {}, o, 1), InvalidArgument);
  }

  TEST_CASE("uniqueness probe") {
    const auto k = derived_constants(11, 7);
    const auto rep = uniqueness_probe(k, {0.0, 1e-6, -1e-6, 1e-3}, ProbeOptions{});
    CHECK(rep.entries[0].survivor);
    CHECK(rep.survivors == 0);
    CHECK(rep.inconclusive == 0);
    for (std::size_t i = 1; i < rep.entries.size(); ++i) CHECK(rep.entries[i].inward_exit_log_distance.has_value());
    // Smaller perturbations survive longer inward.
    CHECK(*rep.entries[1].inward_exit_log_distance > *rep.entries[3].inward_exit_log_distance);
    CHECK(rep.predicted_slope == Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(uniqueness_probe(derived_constants(11, 1.4), {1e-3}, ProbeOptions{}), InvalidArgument);
  }
}
