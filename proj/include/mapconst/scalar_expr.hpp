#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "mapconst/bigfloat.hpp"
#include "mapconst/qsqrt2.hpp"
#include "mapconst/rational.hpp"

namespace mapconst {

/// Algebraic scalar such as "1/2", "1/sqrt(3)" or "2^(-1)".
///
/// Grammar (whitespace ignored):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' ['-'] integer | '^' '(' ['-'] integer ')')?
///   primary := number | 'sqrt' '(' expr ')' | '(' expr ')'
///   number  := digits ['.' digits]
class ScalarExpr {
 public:
  struct Node;

  /// Throws ParseError on malformed input.
  static ScalarExpr parse(std::string_view text);
  static ScalarExpr from_integer(long value);

  /// Evaluates with guard bits and rounds once. Throws DomainError on
  /// division by zero or square root of a negative value.
  BigFloat evaluate(Precision prec) const;
  /// Exact value when the expression lies in Q(sqrt 2).
  std::optional<QSqrt2> exact_qsqrt2() const;
  /// Exact value when the expression is rational.
  std::optional<Rational> exact_rational() const;

  /// The text the expression was parsed from.
  const std::string& text() const { return text_; }

 private:
  ScalarExpr(std::string text, std::shared_ptr<const Node> root);
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// parse + evaluate in one step.
BigFloat parse_scalar(std::string_view expr, Precision prec);

}  // namespace mapconst
