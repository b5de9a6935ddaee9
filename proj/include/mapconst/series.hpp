#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mapconst/bigfloat.hpp"
#include "mapconst/coeff_poly.hpp"
#include "mapconst/engine.hpp"
#include "mapconst/map_spec.hpp"
#include "mapconst/qsqrt2.hpp"
#include "mapconst/rational.hpp"
#include "mapconst/scalar_expr.hpp"

namespace mapconst {

/// coeff(C) * ln(k)^log_power * k^(-exponent).
struct TemplateTerm {
  Rational exponent;
  int log_power = 0;
  CoefficientPoly coeff;

  friend bool operator==(const TemplateTerm& a, const TemplateTerm& b) {
    return a.exponent == b.exponent && a.log_power == b.log_power && a.coeff == b.coeff;
  }
};

/// Conjugating scale lambda = radicand^(1/root). A scaled template stands
/// for lambda * T(k; C / lambda), where T is the stored expansion.
struct TemplateScale {
  ScalarExpr radicand;
  unsigned root = 1;

  std::string str() const;
};

/// A truncated asymptotic expansion offset + sum of terms, as exact data.
struct AsymptoticTemplate {
  std::string map_id;
  /// "builtin" or "derived".
  std::string source;
  /// Text of the map parameter a when the map has one.
  std::optional<std::string> parameter;
  QSqrt2 offset = 0;
  /// Exponent denominators divide this.
  int grid = 1;
  /// Number of exponent blocks, the leading one included.
  int depth = 0;
  std::optional<TemplateScale> scale;
  /// Ascending exponent, then descending log power.
  std::vector<TemplateTerm> terms;
  /// Index into `terms` of the designated free-constant term.
  std::size_t free_term = 0;

  const TemplateTerm& leading() const { return terms.front(); }
  const TemplateTerm* find(const Rational& exponent, int log_power) const;
  /// Block index of an exponent: 0 for the leading block.
  int block_of(const Rational& exponent) const;

  /// Throws TemplateError when an invariant fails: sorted grid exponents,
  /// log power at most the block index, exactly one free term linear in C
  /// with zero constant part.
  void validate() const;
  /// Keeps the first `blocks` exponent blocks.
  AsymptoticTemplate truncated(int blocks) const;
  /// x = alpha + beta * y applied to an expansion of y.
  AsymptoticTemplate affine_image(const QSqrt2& alpha, const QSqrt2& beta) const;

  /// Deterministic text form used by golden files.
  std::string canonical_text() const;
  /// Name of a coefficient in the usual display ("u".."s" for blocks 2 and 3).
  std::string coefficient_name(std::size_t term_index) const;
};

/// The printed expansions for m1, m2, m3 (depth 4) and m4 (general-a display,
/// instantiated at the map's a). Throws TemplateError for other maps, for
/// depth > 4, or when sqrt(a) is not in Q(sqrt 2).
AsymptoticTemplate builtin_template(const MapSpec& map, int depth = 4);

/// S(k; C) with S collapsed to a numeric polynomial in C at a fixed k.
struct CollapsedTemplate {
  /// S(k; C) = sum_i coeffs[i] * C^i.
  std::vector<BigFloat> coeffs;
  Precision precision = kDefaultPrecision;

  BigFloat value(const BigFloat& c) const;
  BigFloat derivative(const BigFloat& c) const;
};

/// Collapses the template at integer k >= 2. ln k and k^(-1/grid) are
/// computed once. Throws DomainError for k < 2.
CollapsedTemplate collapse(const AsymptoticTemplate& t, std::uint64_t k, Precision prec);

/// S(k; C) at precision `prec`.
BigFloat eval_template(const AsymptoticTemplate& t, const BigFloat& c, std::uint64_t k, Precision prec);

/// |x_k - model(k)| for each k from one trajectory pass.
std::vector<BigFloat> residual(const MapSpec& map, const ScalarExpr& x0,
                               const std::function<BigFloat(std::uint64_t, Precision)>& model,
                               const std::vector<std::uint64_t>& ks, Precision prec,
                               const EngineLimits& limits = {});

/// |x_k - S(k; C)| for each k from one trajectory pass.
std::vector<BigFloat> residual(const MapSpec& map, const ScalarExpr& x0, const AsymptoticTemplate& t,
                               const BigFloat& c, const std::vector<std::uint64_t>& ks, Precision prec,
                               const EngineLimits& limits = {});

/// JSON document with exact coefficients as strings.
std::string template_to_json(const AsymptoticTemplate& t, int indent = 2);

}  // namespace mapconst
