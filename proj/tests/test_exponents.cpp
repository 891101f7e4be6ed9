#include <doctest.h>

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/exponents.hpp"

using namespace selfsim;
using doctest::Approx;

namespace {
// 1 + 4/(n - 4 -+ 2 sqrt(n-1)) and (26/9)^(1/6), evaluated with mpmath at 30 digits.
constexpr double p_jl_star_3 = 3.18767264271210862720;
constexpr double p_jl_11 = 6.92202458681633718400;
constexpr double p_jl_15 = 2.13743475529525432438;
constexpr double L_11_7 = 1.19340670375441258244;

bool near(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }
}  // namespace

TEST_SUITE("exponents") {
  TEST_CASE("n = 3 ladder") {
    const auto t = exponent_table(3);
    CHECK(t.fujita.value() == Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(t.singular.value() == 3.0);
    CHECK(t.sobolev.value() == 5.0);
    CHECK_FALSE(t.joseph_lundgren.is_finite());
    CHECK_FALSE(t.lepin.is_finite());
    CHECK(near(t.joseph_lundgren_dual.value(), p_jl_star_3, 1e-14));
    CHECK(t.joseph_lundgren.to_string() == "inf");
  }

  TEST_CASE("n = 11 and n = 15 ladders") {
    const auto t = exponent_table(11);
    CHECK(near(t.sobolev.value(), 13.0 / 9.0, 1e-15));
    CHECK(near(t.joseph_lundgren.value(), p_jl_11, 1e-14));
    CHECK(t.lepin.value() == 7.0);
    CHECK(near(exponent_table(15).joseph_lundgren.value(), p_jl_15, 1e-14));
  }

  TEST_CASE("invalid and low dimensions") {
    CHECK_THROWS_AS(exponent_table(0), InvalidArgument);
    CHECK_THROWS_AS(exponent_table(-1), InvalidArgument);
    const auto t = exponent_table(2);
    CHECK_FALSE(t.singular.is_finite());
    CHECK_FALSE(t.sobolev.is_finite());
    CHECK(t.fujita.value() == 2.0);
  }

  TEST_CASE("unbounded exponents order above every double") {
    const auto inf = Exponent::unbounded();
    CHECK(inf > 1e300);
    CHECK(Exponent::finite(3.0) < inf);
    CHECK(inf == Exponent::unbounded());
    CHECK_THROWS_AS(inf.value(), InvalidArgument);
    CHECK(std::isinf(inf.as_double()));
  }

  TEST_CASE("ordering invariants for n = 3..30") {
    for (int n = 3; n <= 30; ++n) {
      const auto t = exponent_table(n);
      CAPTURE(n);
      CHECK(t.fujita < t.singular);
      CHECK(t.singular < t.sobolev);
      CHECK(t.sobolev < t.joseph_lundgren);
      CHECK(t.singular < t.joseph_lundgren_dual);
      CHECK(t.joseph_lundgren_dual < t.sobolev);
      if (n > 10) CHECK(t.joseph_lundgren < t.lepin);
    }
  }

  TEST_CASE("derived constants") {
    const auto k = derived_constants(3, 5);
    CHECK(k.alpha == 0.5);
    CHECK(k.beta == 0.0);
    CHECK(k.gamma == 0.25);
    CHECK(near(k.L(), std::sqrt(0.5), 1e-15));

    const auto q = derived_constants(11, 7);
    CHECK(near(q.alpha, 1.0 / 3.0, 1e-15));
    CHECK(near(q.beta, 25.0 / 3.0, 1e-15));
    CHECK(near(q.gamma * 6.0, 52.0 / 3.0, 1e-15));
    CHECK(near(q.L(), L_11_7, 1e-14));

    for (double n : {3.0, 7.0, 11.0}) CHECK(near(derived_constants(n, 3).kappa, std::sqrt(0.5), 1e-15));
    CHECK_THROWS_AS(derived_constants(3, 2).L(), AmplitudeUndefined);
    CHECK_THROWS_AS(derived_constants(3, 1), InvalidArgument);
  }

  TEST_CASE("algebraic identities on the grid n = 3..15, p = 1.1..10") {
    for (int n = 3; n <= 15; ++n) {
      for (int j = 11; j <= 100; ++j) {
        const double p = 0.1 * j;
        const auto k = derived_constants(n, p);
        CAPTURE(n);
        CAPTURE(p);
        CHECK(std::abs(k.beta - (n - 2 - 2 * k.alpha)) <= 1e-12 * std::max(1.0, std::abs(k.beta)));
        CHECK((k.gamma > 0) == (p > n / (n - 2.0)));
        if (k.has_L()) {
          CHECK(near(std::pow(k.L(), p - 1), k.gamma, 1e-12));
          const auto r = indicial_roots(n, p);
          CHECK(std::abs((r.first * r.second).real() - (p - 1) * k.gamma) <= 1e-12 * std::max(1.0, (p - 1) * k.gamma));
        }
      }
    }
  }

  TEST_CASE("regime classification") {
    CHECK(classify_regime(11, 13.0 / 9.0).tag == RegimeTag::sobolev_critical);
    CHECK(classify_regime(11, 5).tag == RegimeTag::sobolev_to_jl);
    CHECK(classify_regime(11, 8).tag == RegimeTag::above_lepin);
    CHECK(classify_regime(11, 7).tag == RegimeTag::above_lepin);  // boundary goes up
    CHECK(classify_regime(3, 1.2).tag == RegimeTag::sub_fujita);
    CHECK(classify_regime(3, 2).tag == RegimeTag::fujita_to_singular);
    CHECK(classify_regime(3, 4).tag == RegimeTag::singular_to_sobolev);
    CHECK(classify_regime(3, 5).beta_sign == 0);
    CHECK(to_string(RegimeTag::sobolev_critical) == "SobolevCritical");
  }

  TEST_CASE("regime flags agree with the derived constants") {
    for (int n = 3; n <= 20; ++n) {
      for (int j = 11; j <= 120; ++j) {
        const double p = 0.1 * j;
        const auto r = classify_regime(n, p);
        const auto k = derived_constants(n, p);
        CAPTURE(n);
        CAPTURE(p);
        CHECK(r.has_L == k.has_L());
        if (std::abs(k.beta) > 1e-12) CHECK(r.beta_sign == (k.beta > 0 ? 1 : -1));
      }
    }
  }

  TEST_CASE("indicial roots") {
    const auto r = indicial_roots(11, 7);
    REQUIRE(r.is_real());
    CHECK(r.first.real() == Approx(-4.0).epsilon(1e-13));
    CHECK(r.second.real() == Approx(-13.0 / 3.0).epsilon(1e-13));

    const auto c = indicial_roots(11, 3);
    CHECK_FALSE(c.is_real());
    CHECK(c.first.real() == Approx(-3.5).epsilon(1e-14));
    CHECK(c.first.imag() > 0);
    CHECK(c.second == std::conj(c.first));
    CHECK_THROWS_AS(indicial_roots(3, 2), AmplitudeUndefined);
  }

  TEST_CASE("indicial roots are complex exactly between p_JL* and p_JL") {
    for (int n = 3; n <= 15; ++n) {
      const auto t = exponent_table(n);
      for (int j = 11; j <= 100; ++j) {
        const double p = 0.1 * j;
        if (!(t.singular < p)) continue;
        // Skip points within rounding of a discriminant zero.
        if (std::abs(p - t.joseph_lundgren_dual.value()) < 1e-9) continue;
        if (t.joseph_lundgren.is_finite() && std::abs(p - t.joseph_lundgren.value()) < 1e-9) continue;
        const auto r = indicial_roots(n, p);
        CAPTURE(n);
        CAPTURE(p);
        const bool between = t.joseph_lundgren_dual < p && t.joseph_lundgren > p;
        CHECK(r.is_real() == !between);
        CHECK((r.first.real() < 0) == (t.sobolev < p));
      }
    }
  }

  TEST_CASE("discriminant vanishes at p_JL") {
    CHECK(std::abs(indicial_discriminant(11, p_jl_11)) < 1e-9);
    CHECK(std::abs(indicial_discriminant(3, p_jl_star_3)) < 1e-9);
  }

  TEST_CASE("comparison roots") {
    const auto c = comparison_roots(3, 5, 0.01);
    CHECK(c.a1_plus == Approx(0.48989794855663562).epsilon(1e-14));
    CHECK(c.a1_plus < 0.5);
    CHECK(c.a1_minus > 0.5);
    const auto z = comparison_roots(11, 7, 1e-12);
    const auto k = derived_constants(11, 7);
    CHECK(z.a1_plus == Approx(k.alpha).epsilon(1e-10));
    CHECK(z.a2_plus == Approx(k.alpha + 2 - 11).epsilon(1e-10));
    CHECK(z.a2_plus < 0);
    CHECK_THROWS_AS(comparison_roots(3, 5, 0.25), InvalidArgument);
    CHECK_THROWS_AS(comparison_roots(3, 5, 0.0), InvalidArgument);
  }
}
