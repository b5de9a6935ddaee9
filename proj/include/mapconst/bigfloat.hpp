#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>

namespace mapconst {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 256;
/// Extra bits carried by composite operations before the final rounding.
inline constexpr Precision kGuardBits = 64;

/// Value-semantic wrapper around an `mpfr_t`.
///
/// Every value carries its own precision. Binary operators produce a result at
/// the larger of the operand precisions, rounded to nearest, so each primitive
/// operation has relative error at most 2^(-P). The raw handle is exposed for
/// hot loops that want to reuse storage.
class BigFloat {
 public:
  explicit BigFloat(Precision prec = kDefaultPrecision);
  BigFloat(long value, Precision prec);
  BigFloat(const mpq_class& value, Precision prec);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  /// Parses a decimal literal ("1.25", "-3e-7"). Throws ParseError.
  static BigFloat from_string(std::string_view text, Precision prec);

  Precision precision() const { return mpfr_get_prec(value_); }
  /// Copy rounded to a different precision.
  BigFloat rounded(Precision prec) const;

  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  /// Scientific notation with `significant` digits, e.g. "1.2500000000e-03".
  std::string to_scientific(int significant) const;
  /// Fixed notation with `decimals` digits after the point, truncated toward zero.
  std::string to_fixed_truncated(int decimals) const;
  /// Fixed notation rounded to nearest.
  std::string to_fixed(int decimals) const;

  BigFloat& operator+=(const BigFloat& rhs);
  BigFloat& operator-=(const BigFloat& rhs);
  BigFloat& operator*=(const BigFloat& rhs);
  BigFloat& operator/=(const BigFloat& rhs);
  BigFloat& operator+=(long rhs);
  BigFloat& operator-=(long rhs);
  BigFloat& operator*=(long rhs);
  BigFloat& operator/=(long rhs);

  friend BigFloat operator-(const BigFloat& x);
  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator+(const BigFloat& a, long b);
  friend BigFloat operator-(const BigFloat& a, long b);
  friend BigFloat operator*(const BigFloat& a, long b);
  friend BigFloat operator/(const BigFloat& a, long b);
  friend BigFloat operator-(long a, const BigFloat& b);
  friend BigFloat operator/(long a, const BigFloat& b);

  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b);
  friend std::partial_ordering operator<=>(const BigFloat& a, long b);
  friend bool operator==(const BigFloat& a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }

 private:
  mpfr_t value_;
};

BigFloat abs(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat log(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat pow(const BigFloat& x, long n);
/// Real n-th root (n >= 1).
BigFloat root(const BigFloat& x, unsigned long n);
/// Larger of the two precisions, for mixed-precision expressions.
Precision max_precision(const BigFloat& a, const BigFloat& b);

/// 2^(exponent) at the given precision.
BigFloat power_of_two(long exponent, Precision prec);

}  // namespace mapconst
