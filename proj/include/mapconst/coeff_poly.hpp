#pragma once

#include <string>
#include <vector>

#include "mapconst/bigfloat.hpp"
#include "mapconst/qsqrt2.hpp"

namespace mapconst {

/// Exact polynomial in the free constant C with coefficients in Q(sqrt 2).
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// an empty coefficient list and degree -1.
class CoefficientPoly {
 public:
  CoefficientPoly() = default;
  CoefficientPoly(QSqrt2 constant);  // NOLINT(google-explicit-constructor)
  CoefficientPoly(long constant) : CoefficientPoly(QSqrt2(constant)) {}  // NOLINT(google-explicit-constructor)
  explicit CoefficientPoly(std::vector<QSqrt2> coefficients);

  /// The polynomial "C".
  static CoefficientPoly symbol();

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  /// Coefficient of C^i (zero beyond the degree).
  QSqrt2 coefficient(int i) const;
  const std::vector<QSqrt2>& coefficients() const { return coeffs_; }

  /// Horner evaluation with guard bits, rounded once to `prec`.
  BigFloat evaluate(const BigFloat& c, Precision prec) const;
  /// d/dC.
  CoefficientPoly derivative() const;
  /// p(s * C).
  CoefficientPoly scaled_argument(const QSqrt2& s) const;

  /// "2*C^2 - 3/4*C + 5/32"; compound coefficients are parenthesized.
  std::string str(const std::string& var = "C") const;

  CoefficientPoly& operator+=(const CoefficientPoly& o);
  CoefficientPoly& operator-=(const CoefficientPoly& o);
  CoefficientPoly& operator*=(const CoefficientPoly& o);
  CoefficientPoly& operator*=(const QSqrt2& s);

  friend CoefficientPoly operator+(CoefficientPoly a, const CoefficientPoly& b) { return a += b; }
  friend CoefficientPoly operator-(CoefficientPoly a, const CoefficientPoly& b) { return a -= b; }
  friend CoefficientPoly operator*(CoefficientPoly a, const CoefficientPoly& b) { return a *= b; }
  friend CoefficientPoly operator*(CoefficientPoly a, const QSqrt2& s) { return a *= s; }
  friend CoefficientPoly operator*(const QSqrt2& s, CoefficientPoly a) { return a *= s; }
  friend CoefficientPoly operator-(CoefficientPoly a) { return a *= QSqrt2(-1); }
  friend bool operator==(const CoefficientPoly& a, const CoefficientPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<QSqrt2> coeffs_;
};

}  // namespace mapconst
