#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapconst/bigfloat.hpp"
#include "mapconst/qsqrt2.hpp"
#include "mapconst/rational.hpp"
#include "mapconst/scalar_expr.hpp"

namespace mapconst {

enum class Direction { Decay, ApproachOne, Growth, None };

std::string to_string(Direction d);

/// Coefficient `c + c_a*a + c_x0*x0` of a step polynomial. The two symbols
/// are the map parameter and the initial condition.
struct ParamCoef {
  Rational c = 0;
  Rational c_a = 0;
  Rational c_x0 = 0;

  ParamCoef() = default;
  ParamCoef(long value) : c(value) {}  // NOLINT(google-explicit-constructor)
  ParamCoef(Rational value) : c(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  static ParamCoef param_a(Rational scale = 1) { ParamCoef p; p.c_a = std::move(scale); return p; }
  static ParamCoef param_x0(Rational scale = 1) { ParamCoef p; p.c_x0 = std::move(scale); return p; }

  bool is_zero() const { return c == 0 && c_a == 0 && c_x0 == 0; }
};

/// Interval of admissible values; absent bounds are infinite.
struct Interval {
  std::optional<ScalarExpr> lower;
  std::optional<ScalarExpr> upper;
  bool lower_closed = false;
  bool upper_closed = false;

  std::string str() const;
};

/// Hand-written numeric step kernels. `Generic` evaluates the rational function.
enum class Kernel { M1, M2, M3, M4, M5, Square, Rcf, Cf, Bcf, Ns2, Ns3, Dn2, Dn3, Ak, Bk, Logistic, Generic };

/// A registered recurrence x -> numerator(x) / denominator(x) plus its
/// asymptotic metadata.
struct MapSpec {
  std::string id;
  std::string formula;
  /// Ascending powers of x.
  std::vector<ParamCoef> numerator;
  std::vector<ParamCoef> denominator;
  Interval domain;
  /// Exponents of the expansion live on the grid 1/q.
  int grid = 1;
  /// Leading exponent e0: the iterate behaves like offset + c k^(-e0).
  Rational leading_exponent = 0;
  Direction direction = Direction::None;
  Rational offset = 0;
  /// Coefficient of C in the free-constant term.
  QSqrt2 free_prefactor = 0;
  bool uses_a = false;
  bool uses_x0 = false;
  std::optional<ScalarExpr> a;
  Kernel kernel = Kernel::Generic;
  bool has_builtin_template = false;
  bool derivable = false;

  /// Exact value of a when it is rational.
  std::optional<Rational> rational_a() const;
  /// Exact value of a when it lies in Q(sqrt 2).
  std::optional<QSqrt2> qsqrt2_a() const;
};

/// Registered ids in display order.
const std::vector<std::string>& registry_ids();

/// Looks up a registered map. `a` is required to be positive and is only
/// accepted by maps that use it (m4 defaults to a = 1). Throws
/// std::invalid_argument for unknown ids or misplaced parameters and
/// DomainError for a <= 0.
MapSpec make_map(std::string_view id, std::optional<ScalarExpr> a = std::nullopt);

/// Maps used only by conjugacy checks: "gw2" (xi -> 1/2 + xi^2/2) and
/// "m2y" (y -> y - 3y^2 + 3y^3).
MapSpec make_auxiliary_map(std::string_view id);

/// Instantiates the polynomial coefficients for exact field F (Rational or
/// QSqrt2). Throws std::invalid_argument when a is not exact in F.
template <class F>
struct ExactStep {
  std::vector<F> numerator;
  std::vector<F> denominator;

  F numerator_at(const F& x) const;
  F denominator_at(const F& x) const;
};

template <class F>
ExactStep<F> instantiate_exact(const MapSpec& map, const F& x0);

/// Numeric coefficients at the given precision.
struct NumericStep {
  std::vector<BigFloat> numerator;
  std::vector<BigFloat> denominator;
};

NumericStep instantiate_numeric(const MapSpec& map, const BigFloat& x0, Precision prec);

/// Domain membership. Q(sqrt 2) values are compared exactly with Q(sqrt 2)
/// bounds; binary values against the bound evaluated at 4x their precision.
bool in_domain(const Interval& domain, const BigFloat& x);
bool in_domain(const Interval& domain, const QSqrt2& x);

}  // namespace mapconst
