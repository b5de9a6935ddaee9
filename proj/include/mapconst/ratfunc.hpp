#pragma once

#include <string>
#include <vector>

#include "mapconst/map_spec.hpp"
#include "mapconst/rational.hpp"

namespace mapconst {

/// Polynomial over Q in one variable, ascending coefficients, no trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coefficients);
  static Poly constant(Rational c);
  static Poly variable();

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational operator()(const Rational& x) const;
  Poly pow(unsigned n) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Quotient num/den of polynomials; kept unreduced, compared by cross-multiplication.
class RatFunc {
 public:
  RatFunc(Poly num, Poly den);
  RatFunc(Rational c);  // NOLINT(google-explicit-constructor)
  RatFunc(long c) : RatFunc(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  static RatFunc variable();

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }

  /// this(inner(x)).
  RatFunc compose(const RatFunc& inner) const;

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  /// Equality as rational functions.
  friend bool operator==(const RatFunc& a, const RatFunc& b);

 private:
  Poly num_;
  Poly den_;
};

/// Step function of a map with rational coefficients. Maps that depend on the
/// initial condition take it as `x0`. Throws std::invalid_argument when a is
/// not rational.
RatFunc step_function(const MapSpec& map, const Rational& x0 = 0);

}  // namespace mapconst
