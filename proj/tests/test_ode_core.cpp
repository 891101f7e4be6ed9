#include <doctest.h>

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/ode_core.hpp"
#include "selfsim/trajectory.hpp"
#include "support.hpp"

using namespace selfsim;
using doctest::Approx;

namespace {

constexpr EquationKind kinds[] = {EquationKind::forward_profile, EquationKind::backward_profile, EquationKind::steady};

// The physical-frame equations written out independently of ode_core.
double physical_curvature(EquationKind kind, const Params& k, double r, double w, double dw) {
  const double q = kind == EquationKind::forward_profile ? 1.0 : (kind == EquationKind::backward_profile ? -1.0 : 0.0);
  return -((k.n - 1.0) / r + q * r / 2.0) * dw - q * w / (k.p - 1.0) - std::pow(w, k.p);
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_SUITE("ode_core") {
  TEST_CASE("names parse back") {
    for (auto k : kinds) CHECK(parse_kind(to_string(k)) == k);
    CHECK(parse_kind("backward") == EquationKind::backward_profile);
    CHECK(parse_frame("v") == Frame::scaled_v);
    CHECK(parse_frame("log") == Frame::log_phase);
    CHECK_THROWS_AS(parse_kind("sideways"), InvalidArgument);
    CHECK_THROWS_AS(parse_frame("x"), InvalidArgument);
  }

  TEST_CASE("equilibria are exact") {
    const auto k = derived_constants(11, 7);
    const double L = k.L();
    for (auto kind : kinds) {
      for (double r : {1e-3, 1.0, 7.5}) {
        const auto d = rhs(kind, Frame::scaled_v, k, r, L, 0.0);
        CHECK(d.dvalue == 0.0);
        CHECK(d.dslope == 0.0);
        CHECK(rhs(kind, Frame::normalized_h, k, r, 1.0, 0.0).dslope == 0.0);
        CHECK(rhs(kind, Frame::scaled_v, k, r, 0.0, 0.0).dslope == 0.0);
      }
    }
    CHECK(rhs(EquationKind::steady, Frame::log_phase, k, 0.3, L, 0.0).dslope == 0.0);
    CHECK(rhs(EquationKind::steady, Frame::log_phase, k, 0.3, 0.0, 0.0).dslope == 0.0);
    for (double p : {1.5, 2.0, 3.0, 5.0, 7.0}) {
      const auto q = derived_constants(3, p);
      CHECK(rhs(EquationKind::backward_profile, Frame::physical_w, q, 1.0, q.kappa, 0.0).dslope == 0.0);
    }
  }

  TEST_CASE("log phase only for the steady equation") {
    const auto k = derived_constants(11, 7);
    CHECK_THROWS_AS(rhs(EquationKind::forward_profile, Frame::log_phase, k, 0.0, 1.0, 0.0), UnsupportedCombination);
    CHECK_THROWS_AS(rhs(EquationKind::backward_profile, Frame::log_phase, k, 0.0, 1.0, 0.0), UnsupportedCombination);
  }

  TEST_CASE("strict power rejects negative values") {
    const auto k = derived_constants(3, 2.5);
    CHECK_THROWS_AS(rhs(EquationKind::forward_profile, Frame::physical_w, k, 1.0, -0.1, 0.0), DomainError);
    CHECK_NOTHROW(rhs(EquationKind::forward_profile, Frame::physical_w, k, 1.0, -0.1, 0.0, PowerPolicy::odd_extension));
    CHECK(reaction_power(-2.0, 1.5, PowerPolicy::odd_extension) == Approx(std::pow(2.0, 1.5)));
  }

  TEST_CASE("physical right-hand sides match the written equations") {
    for (int i = 0; i < 500; ++i) {
      const double n = testing::uniform(2.5, 16.0);
      const double p = testing::uniform(1.2, 9.0);
      const auto k = derived_constants(n, p);
      const double r = testing::log_uniform(1e-3, 30.0);
      const double w = testing::log_uniform(1e-3, 10.0);
      const double dw = testing::uniform(-5.0, 5.0);
      for (auto kind : kinds) {
        const auto d = rhs(kind, Frame::physical_w, k, r, w, dw);
        CHECK(d.dvalue == dw);
        CHECK(close(d.dslope, physical_curvature(kind, k, r, w, dw), 1e-11));
      }
    }
  }

  TEST_CASE("every frame carries the same solution") {
    // A physical jet on a solution, moved to another frame, must satisfy
    // that frame's equation.
    for (int i = 0; i < 400; ++i) {
      const double n = testing::uniform(3.0, 16.0);
      const double p = n / (n - 2.0) + testing::uniform(0.05, 6.0);
      const auto k = derived_constants(n, p);
      const double r = testing::log_uniform(1e-2, 20.0);
      const double w = testing::log_uniform(1e-2, 5.0);
      const double dw = testing::uniform(-2.0, 2.0);
      for (auto kind : kinds) {
        const Jet j{r, w, dw, physical_curvature(kind, k, r, w, dw)};
        for (auto frame : {Frame::scaled_v, Frame::normalized_h, Frame::log_phase}) {
          if (frame == Frame::log_phase && kind != EquationKind::steady) continue;
          const Jet t = transform_jet(j, Frame::physical_w, frame, k);
          const auto d = rhs(kind, frame, k, t.coord, t.value, t.slope);
          CAPTURE(n);
          CAPTURE(p);
          CAPTURE(r);
          CHECK(close(d.dslope, t.curvature, 1e-9));
        }
      }
    }
  }

  TEST_CASE("normalized frame at p = p_S has the 1/r coefficient") {
    const auto k = derived_constants(3, 5);
    CHECK(k.n - 1 - 2 * k.alpha == 1.0);
    CHECK(k.gamma == k.alpha * k.alpha);
    const double r = 1.7, h = 0.8, dh = -0.3;
    const double expected = -(1.0 / r + r / 2) * dh - k.alpha * k.alpha * (std::pow(h, 5) - h) / (r * r);
    CHECK(rhs(EquationKind::forward_profile, Frame::normalized_h, k, r, h, dh).dslope == Approx(expected).epsilon(1e-13));
  }

  TEST_CASE("log phase reversal negates beta") {
    const auto k = derived_constants(11, 5);
    for (int i = 0; i < 100; ++i) {
      const double v = testing::uniform(0.1, 2.0), dv = testing::uniform(-1.0, 1.0);
      // y(s) = v(-s) solves y'' - beta y' + y^p - gamma y = 0.
      const double reversed = k.beta * dv - std::pow(v, k.p) + k.gamma * v;
      CHECK(rhs(EquationKind::steady, Frame::log_phase, k, 0.0, v, -dv).dslope == Approx(reversed).epsilon(1e-12));
    }
  }

  TEST_CASE("transform examples") {
    const auto k = derived_constants(3, 5);
    const ProfileState s{2.0, 1.0, 0.0, Frame::physical_w, EquationKind::steady, k};
    const auto v = transform_state(s, Frame::scaled_v);
    CHECK(v.value == Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(v.slope == Approx(0.5 / std::sqrt(2.0)).epsilon(1e-15));

    const ProfileState eq{1.3, k.L(), 0.0, Frame::scaled_v, EquationKind::forward_profile, k};
    const auto h = transform_state(eq, Frame::normalized_h);
    CHECK(h.value == Approx(1.0).epsilon(1e-15));
    CHECK(h.slope == 0.0);

    const auto sub = derived_constants(3, 2);
    const ProfileState w{1.0, 1.0, 0.0, Frame::physical_w, EquationKind::steady, sub};
    CHECK_THROWS_AS(transform_state(w, Frame::normalized_h), AmplitudeUndefined);
  }

  TEST_CASE("frame round trips are identities") {
    constexpr Frame frames[] = {Frame::physical_w, Frame::scaled_v, Frame::normalized_h, Frame::log_phase};
    for (int i = 0; i < 1000; ++i) {
      const double n = testing::uniform(3.0, 16.0);
      const double p = n / (n - 2.0) + testing::uniform(0.05, 6.0);
      const auto k = derived_constants(n, p);
      const ProfileState s{testing::log_uniform(1e-4, 1e3), testing::uniform(-3.0, 3.0), testing::uniform(-3.0, 3.0),
                           Frame::physical_w, EquationKind::steady, k};
      for (auto f : frames) {
        const auto back = transform_state(transform_state(s, f), Frame::physical_w);
        CHECK(close(back.coord, s.coord, 1e-12));
        CHECK(close(back.value, s.value, 1e-12));
        // w' = r^{-alpha}(v' - alpha v/r) cancels when the two terms are close
        const double cancel = k.alpha * std::abs(s.value) / s.coord;
        CHECK(std::abs(back.slope - s.slope) <= 1e-13 * std::max({1.0, std::abs(s.slope), cancel}));
      }
    }
  }

  TEST_CASE("singular solution") {
    const auto k = derived_constants(3, 5);
    CHECK(u_star(k, 1.0).value == Approx(0.70710678118654752).epsilon(1e-15));
    // mpmath: (26/9)^(1/6) * 4^(-1/3)
    CHECK(u_star(derived_constants(11, 7), 4.0).value == Approx(0.75179911357291969).epsilon(1e-14));
    for (double r : {1e-3, 0.5, 40.0}) {
      const Jet v = transform_jet(u_star(k, r), Frame::physical_w, Frame::scaled_v, k);
      CHECK(v.value == Approx(k.L()).epsilon(1e-14));
      CHECK(std::abs(v.slope) < 1e-12);
    }
    CHECK_THROWS_AS(u_star(derived_constants(3, 2), 1.0), AmplitudeUndefined);
  }

  TEST_CASE("potentials") {
    const auto k = derived_constants(3, 5);
    CHECK(potential_d(k, 1.0) == 0.0);
    CHECK(potential_b(k, 1.0) == Approx(-1.0 / 12.0).epsilon(1e-15));
    const double L = k.L();
    CHECK(potential_a(k, L) == Approx(std::pow(L, 6) * (1.0 / 6 - 0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(potential_b(derived_constants(3, 2.5), -0.5), DomainError);
  }

  TEST_CASE("potential derivatives against central differences") {
    for (double p : {1.5, 3.0, 5.0, 7.0}) {
      const auto k = derived_constants(11, p);
      for (int i = 0; i < 200; ++i) {
        const double xi = testing::uniform(0.05, 3.0), h = 1e-5;
        const double db = (potential_b(k, xi + h) - potential_b(k, xi - h)) / (2 * h);
        const double da = (potential_a(k, xi + h) - potential_a(k, xi - h)) / (2 * h);
        CHECK(std::abs(db - potential_d(k, xi)) < 1e-6 * std::max(1.0, std::abs(db)));
        CHECK(std::abs(da - (std::pow(xi, p) - k.gamma * xi)) < 1e-6 * std::max(1.0, std::abs(da)));
      }
    }
    const auto m = derived_constants(3, 5);
    for (double xi : {0.2, 0.7, 1.5, 2.5}) CHECK(potential_b(m, xi) > potential_b(m, 1.0));
  }

  TEST_CASE("quadratic remainder") {
    const auto k = derived_constants(11, 7);
    const double L = k.L();
    CHECK(remainder_f(k, 0.0) == 0.0);
    const double curv = 0.5 * k.p * (k.p - 1) * std::pow(L, k.p - 2);
    for (double u : {1e-2, 1e-4, -1e-4, 1e-6, 1e-8})
      CHECK(remainder_f(k, u) / (u * u) == Approx(curv).epsilon(std::max(1e-9, 50 * std::abs(u))));
    // f'(0) = 0
    CHECK(std::abs((remainder_f(k, 1e-7) - remainder_f(k, -1e-7)) / 2e-7) < 1e-6);
    // Closed form and series agree where both are accurate.
    const double u = 2e-3;
    CHECK(remainder_f(k, u) == Approx(std::pow(L + u, 7) - std::pow(L, 7) - 7 * std::pow(L, 6) * u).epsilon(1e-9));
    // The printed reading evaluated at v = L + u does not vanish with u.
    CHECK(std::abs(remainder_f_as_printed(k, L + 1e-6)) > 1.0);
    CHECK_THROWS_AS(remainder_f(k, -2 * L), DomainError);
    const auto kit = scalar_kit(k, 1.0);
    CHECK(kit.f.has_value());
    CHECK(kit.d == potential_d(k, 1.0));
  }

  TEST_CASE("residual of exact solutions") {
    for (auto [n, p] : {std::pair{3.0, 5.0}, std::pair{11.0, 7.0}, std::pair{11.0, 3.0}}) {
      const auto k = derived_constants(n, p);
      for (auto kind : kinds)
        for (auto frame : {Frame::physical_w, Frame::scaled_v, Frame::normalized_h})
          CHECK(residual_of(sample_u_star(k, kind, frame, 0.1, 10.0, 300)) < 1e-9);
      CHECK(residual_of(sample_u_star(k, EquationKind::steady, Frame::log_phase, 0.1, 10.0, 300)) < 1e-9);
      CHECK(residual_of(sample_constant(k, EquationKind::backward_profile, k.kappa, 1e-3, 20.0, 300)) < 1e-12);
    }
  }

  TEST_CASE("residual detects non-solutions and needs three samples") {
    const auto k = derived_constants(3, 5);
    const auto bad = testing::sampled(
        k, EquationKind::steady, log_grid(0.1, 10.0, 100), [](double r) { return 1.0 / (1.0 + r * r); },
        [](double r) { return -2 * r / std::pow(1 + r * r, 2); },
        [](double r) { return (6 * r * r - 2) / std::pow(1 + r * r, 3); });
    CHECK(residual_of(bad) > 1e-2);
    CHECK_THROWS_AS(residual_of(sample_u_star(k, EquationKind::steady, Frame::physical_w, 1.0, 2.0, 2)),
                    InsufficientData);
  }
}
