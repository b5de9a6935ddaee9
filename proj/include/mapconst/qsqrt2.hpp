#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mapconst/bigfloat.hpp"
#include "mapconst/rational.hpp"

namespace mapconst {

/// Exact element p + q*sqrt(2) of the field Q(sqrt 2).
class QSqrt2 {
 public:
  QSqrt2() = default;
  QSqrt2(long p) : p_(p) {}  // NOLINT(google-explicit-constructor)
  QSqrt2(Rational p) : p_(std::move(p)) {}  // NOLINT(google-explicit-constructor)
  QSqrt2(Rational p, Rational q) : p_(std::move(p)), q_(std::move(q)) {}

  static QSqrt2 sqrt2() { return {0, 1}; }

  const Rational& rational_part() const { return p_; }
  const Rational& sqrt2_part() const { return q_; }

  bool is_zero() const { return p_ == 0 && q_ == 0; }
  bool is_rational() const { return q_ == 0; }
  /// Exact sign of the real number.
  int sign() const;

  QSqrt2 conjugate() const { return {p_, -q_}; }
  /// p^2 - 2 q^2.
  Rational norm() const { return p_ * p_ - 2 * q_ * q_; }
  QSqrt2 inverse() const;
  QSqrt2 pow(long n) const;
  /// Non-negative square root when it lies in Q(sqrt 2).
  std::optional<QSqrt2> sqrt() const;

  BigFloat to_bigfloat(Precision prec) const;
  std::size_t decimal_digits() const;

  /// Canonical text: "p/q", "r/s*sqrt2", or "p/q+r/s*sqrt2" ("-" when q < 0).
  std::string str() const;
  /// Inverse of str(). Throws ParseError.
  static QSqrt2 parse(std::string_view text);

  QSqrt2& operator+=(const QSqrt2& o);
  QSqrt2& operator-=(const QSqrt2& o);
  QSqrt2& operator*=(const QSqrt2& o);
  QSqrt2& operator/=(const QSqrt2& o);

  friend QSqrt2 operator+(QSqrt2 a, const QSqrt2& b) { return a += b; }
  friend QSqrt2 operator-(QSqrt2 a, const QSqrt2& b) { return a -= b; }
  friend QSqrt2 operator*(QSqrt2 a, const QSqrt2& b) { return a *= b; }
  friend QSqrt2 operator/(QSqrt2 a, const QSqrt2& b) { return a /= b; }
  friend QSqrt2 operator-(const QSqrt2& a) { return {-a.p_, -a.q_}; }
  friend bool operator==(const QSqrt2& a, const QSqrt2& b) { return a.p_ == b.p_ && a.q_ == b.q_; }

 private:
  Rational p_ = 0;
  Rational q_ = 0;
};

}  // namespace mapconst
