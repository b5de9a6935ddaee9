#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mapconst/coeff_poly.hpp"
#include "mapconst/qsqrt2.hpp"
#include "mapconst/rational.hpp"

namespace mapconst {

/// Coefficient c0 + sum_i c_i * U_i, affine in the unknown symbols U_i.
class AffineCoef {
 public:
  AffineCoef() = default;
  AffineCoef(CoefficientPoly constant);  // NOLINT(google-explicit-constructor)
  AffineCoef(QSqrt2 constant) : AffineCoef(CoefficientPoly(std::move(constant))) {}  // NOLINT
  AffineCoef(long constant) : AffineCoef(CoefficientPoly(constant)) {}  // NOLINT
  static AffineCoef unknown(int id, CoefficientPoly scale = 1);

  const CoefficientPoly& constant() const { return constant_; }
  const std::map<int, CoefficientPoly>& unknowns() const { return unknowns_; }
  /// Coefficient of U_id (zero when absent).
  CoefficientPoly unknown_coefficient(int id) const;
  bool is_zero() const { return constant_.is_zero() && unknowns_.empty(); }
  bool has_unknowns() const { return !unknowns_.empty(); }

  /// Replaces U_id by a known value.
  AffineCoef substitute(int id, const CoefficientPoly& value) const;

  AffineCoef& operator+=(const AffineCoef& o);
  AffineCoef& operator-=(const AffineCoef& o);
  AffineCoef& operator*=(const CoefficientPoly& s);
  friend AffineCoef operator+(AffineCoef a, const AffineCoef& b) { return a += b; }
  friend AffineCoef operator-(AffineCoef a, const AffineCoef& b) { return a -= b; }
  friend AffineCoef operator*(AffineCoef a, const CoefficientPoly& s) { return a *= s; }
  /// Throws DerivationError when both factors carry unknowns.
  friend AffineCoef operator*(const AffineCoef& a, const AffineCoef& b);
  friend bool operator==(const AffineCoef& a, const AffineCoef& b) {
    return a.constant_ == b.constant_ && a.unknowns_ == b.unknowns_;
  }

 private:
  void prune();
  CoefficientPoly constant_;
  std::map<int, CoefficientPoly> unknowns_;
};

/// Finite sum of coeff * ln(k)^j * k^(-tick/grid).
///
/// Exponents are stored as integer ticks on the grid 1/grid; larger ticks are
/// smaller terms. Zero coefficients are never stored. Every operation that
/// takes `max_tick` drops the terms beyond it and is exact below it, treating
/// its inputs as exact.
class LogLaurentSeries {
 public:
  using Key = std::pair<int, int>;  // (tick, log power)

  explicit LogLaurentSeries(int grid = 1);
  static LogLaurentSeries monomial(int grid, int tick, int log_power, AffineCoef coeff);

  int grid() const { return grid_; }
  const std::map<Key, AffineCoef>& terms() const { return terms_; }
  AffineCoef coefficient(int tick, int log_power) const;
  /// Smallest tick with a nonzero coefficient.
  std::optional<int> lead_tick() const;
  int max_log_power() const;
  bool is_zero() const { return terms_.empty(); }
  bool has_unknowns() const;

  void add(int tick, int log_power, const AffineCoef& c);
  LogLaurentSeries truncated(int max_tick) const;
  /// Multiplies every term by k^(-shift/grid).
  LogLaurentSeries shifted(int ticks) const;
  LogLaurentSeries substitute(int id, const CoefficientPoly& value) const;

  /// Tick of a rational exponent on this grid. Throws std::invalid_argument off-grid.
  int tick_of(const Rational& exponent) const;
  Rational exponent_of(int tick) const { return ratio(tick, grid_); }

  LogLaurentSeries& operator+=(const LogLaurentSeries& o);
  LogLaurentSeries& operator-=(const LogLaurentSeries& o);
  LogLaurentSeries& operator*=(const CoefficientPoly& s);
  friend LogLaurentSeries operator+(LogLaurentSeries a, const LogLaurentSeries& b) { return a += b; }
  friend LogLaurentSeries operator-(LogLaurentSeries a, const LogLaurentSeries& b) { return a -= b; }
  friend LogLaurentSeries operator*(LogLaurentSeries a, const CoefficientPoly& s) { return a *= s; }
  friend bool operator==(const LogLaurentSeries& a, const LogLaurentSeries& b) {
    return a.grid_ == b.grid_ && a.terms_ == b.terms_;
  }

  /// "c*L^j*k^(-e)" terms joined by " + ", for diagnostics.
  std::string str() const;

 private:
  int grid_;
  std::map<Key, AffineCoef> terms_;
};

LogLaurentSeries multiply(const LogLaurentSeries& a, const LogLaurentSeries& b, int max_tick);
/// s^n through max_tick.
LogLaurentSeries power(const LogLaurentSeries& s, unsigned n, int max_tick);
/// sum_i coeffs[i] * s^i through max_tick.
LogLaurentSeries polynomial_of(const std::vector<QSqrt2>& coeffs, const LogLaurentSeries& s, int max_tick);
/// Lead tick of polynomial_of(coeffs, s, .) without computing it. Falls back
/// to computing when s has a constant term.
std::optional<int> predicted_lead(const std::vector<QSqrt2>& coeffs, const LogLaurentSeries& s);
/// 1/s through max_tick. The leading term must be a nonzero constant without
/// logarithm or unknowns (DerivationError otherwise).
LogLaurentSeries reciprocal(const LogLaurentSeries& s, int max_tick);
/// s(k+1) expanded in k^(-1/grid) and ln k through max_tick.
LogLaurentSeries shift_expand(const LogLaurentSeries& s, int max_tick);
/// numerator(s) / denominator(s) through max_tick.
LogLaurentSeries apply_rational(const std::vector<QSqrt2>& numerator, const std::vector<QSqrt2>& denominator,
                                const LogLaurentSeries& s, int max_tick);

}  // namespace mapconst
