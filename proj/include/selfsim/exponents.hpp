#pragma once

#include <array>
#include <compare>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

namespace selfsim {

/// A critical exponent that may be +infinity (p_JL for n <= 10, p_L for
/// n <= 10, p_sg and p_S for n <= 2). Comparisons are total: every finite
/// value orders below `unbounded()`, and two unbounded values compare equal.
class Exponent {
 public:
  static constexpr Exponent unbounded() { return Exponent{}; }
  static Exponent finite(double value);

  constexpr bool is_finite() const { return finite_; }
  /// Throws InvalidArgument when unbounded.
  double value() const;
  /// Finite value, or +inf as a double for plotting/formatting only.
  double as_double() const;
  /// "inf" for the unbounded value, shortest round-trip decimal otherwise.
  std::string to_string() const;

  friend std::weak_ordering operator<=>(const Exponent& a, const Exponent& b);
  friend bool operator==(const Exponent& a, const Exponent& b);
  friend std::weak_ordering operator<=>(const Exponent& a, double p);
  friend bool operator==(const Exponent& a, double p);

 private:
  constexpr Exponent() = default;
  bool finite_ = false;
  double value_ = 0.0;
};

struct ExponentTable {
  double n = 0.0;
  Exponent fujita = Exponent::unbounded();                // p_F = 1 + 2/n
  Exponent singular = Exponent::unbounded();              // p_sg = n/(n-2)_+
  Exponent sobolev = Exponent::unbounded();               // p_S = (n+2)/(n-2)_+
  Exponent joseph_lundgren = Exponent::unbounded();       // p_JL, +inf for n <= 10
  Exponent joseph_lundgren_dual = Exponent::unbounded();  // p_JL^*, +inf for n <= 2 (undefined there)
  Exponent lepin = Exponent::unbounded();                 // p_L = (n-4)/(n-10), +inf for n <= 10
};

/// Closed-form exponent ladder. Throws InvalidArgument for n <= 0.
ExponentTable exponent_table(double n);

/// The pair (n, p) together with every constant derived from it.
struct Params {
  double n = 0.0;
  double p = 0.0;
  double alpha = 0.0;  // 2/(p-1)
  double beta = 0.0;   // ((n-2)p - (n+2))/(p-1)
  double gamma = 0.0;  // 2((n-2)p - n)/(p-1)^2
  double kappa = 0.0;  // (p-1)^{-1/(p-1)}
  std::optional<double> amplitude;  // L = gamma^{1/(p-1)}, only when gamma > 0

  bool has_L() const { return amplitude.has_value(); }
  /// Throws AmplitudeUndefined when gamma <= 0.
  double L() const;
};

/// Throws InvalidArgument unless p > 1 and n > 0.
Params derived_constants(double n, double p);

enum class RegimeTag {
  sub_fujita,
  fujita_to_singular,
  singular_to_sobolev,
  sobolev_critical,
  sobolev_to_jl,
  jl_to_lepin,
  above_lepin,
};

std::string_view to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag = RegimeTag::sub_fujita;
  bool has_L = false;
  int beta_sign = 0;  // -1, 0, +1
};

/// Boundary values belong to the upper regime, except p == p_S which is
/// reported as sobolev_critical. Equality with an exponent is tested to a
/// few ulps so that p = 13.0/9.0 matches p_S(11).
Regime classify_regime(double n, double p);

/// Roots of mu^2 + beta mu + 2(n-2-alpha) = 0, ordered by real part
/// descending (for a complex pair, positive imaginary part first).
struct IndicialRoots {
  std::complex<double> first;
  std::complex<double> second;
  double discriminant = 0.0;  // beta^2 - 8(n-2-alpha)
  bool is_real() const { return discriminant >= 0.0; }
};

/// Requires p > p_sg. The constant term is cross-checked against (p-1)gamma.
IndicialRoots indicial_roots(double n, double p);

/// beta^2 - 8(n-2-alpha) as a function of continuous (n, p).
double indicial_discriminant(double n, double p);

struct ComparisonRoots {
  double a1_plus = 0.0;
  double a1_minus = 0.0;
  double a2_plus = 0.0;
  double a2_minus = 0.0;
};

/// a_1^{+-} = alpha - (n-2 - sqrt((n-2)^2 -+ 4 eps))/2,
/// a_2^{+-} = alpha - (n-2 + sqrt((n-2)^2 -+ 4 eps))/2.
/// Requires 0 < eps < (n-2)^2/4.
ComparisonRoots comparison_roots(double n, double p, double eps);

}  // namespace selfsim
