#include "selfsim/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selfsim/errors.hpp"
#include "selfsim/format.hpp"

namespace selfsim {

Exponent Exponent::finite(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("Exponent::finite: value must be finite");
  Exponent e;
  e.finite_ = true;
  e.value_ = value;
  return e;
}

double Exponent::value() const {
  if (!finite_) throw InvalidArgument("exponent is unbounded (+inf)");
  return value_;
}

double Exponent::as_double() const {
  return finite_ ? value_ : std::numeric_limits<double>::infinity();
}

std::string Exponent::to_string() const { return finite_ ? shortest(value_) : "inf"; }

std::weak_ordering operator<=>(const Exponent& a, const Exponent& b) {
  if (!a.finite_ && !b.finite_) return std::weak_ordering::equivalent;
  if (!a.finite_) return std::weak_ordering::greater;
  if (!b.finite_) return std::weak_ordering::less;
  if (a.value_ < b.value_) return std::weak_ordering::less;
  if (a.value_ > b.value_) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

bool operator==(const Exponent& a, const Exponent& b) { return (a <=> b) == 0; }

std::weak_ordering operator<=>(const Exponent& a, double p) {
  if (!a.finite_) return std::weak_ordering::greater;
  if (a.value_ < p) return std::weak_ordering::less;
  if (a.value_ > p) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

bool operator==(const Exponent& a, double p) { return a.finite_ && a.value_ == p; }

ExponentTable exponent_table(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("exponent_table: dimension must be positive");
  ExponentTable t;
  t.n = n;
  t.fujita = Exponent::finite(1.0 + 2.0 / n);
  if (n > 2.0) {
    t.singular = Exponent::finite(n / (n - 2.0));
    t.sobolev = Exponent::finite((n + 2.0) / (n - 2.0));
    t.joseph_lundgren_dual = Exponent::finite(1.0 + 4.0 / (n - 4.0 + 2.0 * std::sqrt(n - 1.0)));
  } else {
    t.singular = Exponent::unbounded();
    t.sobolev = Exponent::unbounded();
    t.joseph_lundgren_dual = Exponent::unbounded();
  }
  if (n > 10.0) {
    t.joseph_lundgren = Exponent::finite(1.0 + 4.0 / (n - 4.0 - 2.0 * std::sqrt(n - 1.0)));
    t.lepin = Exponent::finite((n - 4.0) / (n - 10.0));
  } else {
    t.joseph_lundgren = Exponent::unbounded();
    t.lepin = Exponent::unbounded();
  }
  return t;
}

double Params::L() const {
  if (!amplitude)
    throw AmplitudeUndefined("L undefined: gamma = " + shortest(gamma) + " <= 0 (p <= p_sg)");
  return *amplitude;
}

Params derived_constants(double n, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("derived_constants: p must exceed 1");
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("derived_constants: n must be positive");
  Params k;
  k.n = n;
  k.p = p;
  const double q = p - 1.0;
  k.alpha = 2.0 / q;
  k.beta = ((n - 2.0) * p - (n + 2.0)) / q;
  k.gamma = 2.0 * ((n - 2.0) * p - n) / (q * q);
  k.kappa = std::pow(q, -1.0 / q);
  if (k.gamma > 0.0) k.amplitude = std::pow(k.gamma, 1.0 / q);
  return k;
}

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::sub_fujita: return "subFujita";
    case RegimeTag::fujita_to_singular: return "FujitaToSingular";
    case RegimeTag::singular_to_sobolev: return "singularToSobolev";
    case RegimeTag::sobolev_critical: return "SobolevCritical";
    case RegimeTag::sobolev_to_jl: return "SobolevToJL";
    case RegimeTag::jl_to_lepin: return "JLToLepin";
    case RegimeTag::above_lepin: return "aboveLepin";
  }
  return "unknown";
}

namespace {

// p == e up to a few ulps, so 13.0/9.0 and (11+2)/(11-2) agree.
bool same_exponent(double p, const Exponent& e) {
  if (!e.is_finite()) return false;
  return std::abs(p - e.value()) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(p);
}

bool at_or_above(double p, const Exponent& e) { return same_exponent(p, e) || e <= p; }

}  // namespace

Regime classify_regime(double n, double p) {
  const Params k = derived_constants(n, p);
  const ExponentTable t = exponent_table(n);
  Regime r;
  r.has_L = k.has_L();
  if (same_exponent(p, t.sobolev)) {
    r.tag = RegimeTag::sobolev_critical;
    r.beta_sign = 0;
    return r;
  }
  r.beta_sign = k.beta > 0.0 ? 1 : (k.beta < 0.0 ? -1 : 0);
  if (at_or_above(p, t.lepin)) r.tag = RegimeTag::above_lepin;
  else if (at_or_above(p, t.joseph_lundgren)) r.tag = RegimeTag::jl_to_lepin;
  else if (at_or_above(p, t.sobolev)) r.tag = RegimeTag::sobolev_to_jl;
  else if (at_or_above(p, t.singular)) r.tag = RegimeTag::singular_to_sobolev;
  else if (at_or_above(p, t.fujita)) r.tag = RegimeTag::fujita_to_singular;
  else r.tag = RegimeTag::sub_fujita;
  return r;
}

double indicial_discriminant(double n, double p) {
  const Params k = derived_constants(n, p);
  return k.beta * k.beta - 8.0 * (n - 2.0 - k.alpha);
}

IndicialRoots indicial_roots(double n, double p) {
  const Params k = derived_constants(n, p);
  if (!(k.gamma > 0.0)) throw AmplitudeUndefined("indicial_roots: requires p > p_sg");
  const double constant = 2.0 * (n - 2.0 - k.alpha);
  const double via_gamma = (p - 1.0) * k.gamma;
  if (std::abs(constant - via_gamma) > 1e-12 * std::max(1.0, std::abs(constant)))
    throw Error("indicial_roots: constant term disagrees with (p-1)gamma");

  IndicialRoots roots;
  roots.discriminant = k.beta * k.beta - 4.0 * constant;
  if (roots.discriminant >= 0.0) {
    const double sq = std::sqrt(roots.discriminant);
    // Cancellation-free pair: q = -(beta + sign(beta) sq)/2, roots q and c/q.
    const double q = -0.5 * (k.beta + std::copysign(sq, k.beta));
    double r1 = q;
    double r2 = q != 0.0 ? constant / q : 0.0;
    if (r1 < r2) std::swap(r1, r2);
    roots.first = {r1, 0.0};
    roots.second = {r2, 0.0};
  } else {
    const double re = -0.5 * k.beta;
    const double im = 0.5 * std::sqrt(-roots.discriminant);
    roots.first = {re, im};
    roots.second = {re, -im};
  }
  return roots;
}

ComparisonRoots comparison_roots(double n, double p, double eps) {
  const Params k = derived_constants(n, p);
  const double m = n - 2.0;
  if (!(eps > 0.0) || !(eps < 0.25 * m * m))
    throw InvalidArgument("comparison_roots: eps must lie in (0, (n-2)^2/4)");
  const double root_minus = std::sqrt(m * m - 4.0 * eps);  // used by the '+' family
  const double root_plus = std::sqrt(m * m + 4.0 * eps);   // used by the '-' family
  ComparisonRoots c;
  c.a1_plus = k.alpha - 0.5 * (m - root_minus);
  c.a1_minus = k.alpha - 0.5 * (m - root_plus);
  c.a2_plus = k.alpha - 0.5 * (m + root_minus);
  c.a2_minus = k.alpha - 0.5 * (m + root_plus);
  return c;
}

}  // namespace selfsim
