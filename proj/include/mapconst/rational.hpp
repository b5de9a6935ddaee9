#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace mapconst {

/// Exact rational, always canonical (gcd 1, positive denominator).
using Rational = mpq_class;

/// num/den in canonical form. Throws DomainError for den == 0.
Rational ratio(long num, long den);

/// Parses "p", "-p" or "p/q". Throws ParseError.
Rational parse_rational(std::string_view text);

/// "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& r);

/// Exact n-th root when `r` is a perfect n-th power (negative r allowed for odd n).
std::optional<Rational> exact_root(const Rational& r, unsigned long n);

/// Decimal digits of the larger of numerator and denominator.
std::size_t decimal_digits(const Rational& r);

/// Binomial coefficient binom(x, m) for rational x and integer m >= 0.
Rational binomial(const Rational& x, unsigned m);

}  // namespace mapconst
