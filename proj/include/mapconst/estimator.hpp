#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mapconst/bigfloat.hpp"
#include "mapconst/engine.hpp"
#include "mapconst/map_spec.hpp"
#include "mapconst/scalar_expr.hpp"
#include "mapconst/series.hpp"

namespace mapconst {

enum class TemplateSource { Builtin, Derived };

std::string to_string(TemplateSource source);
/// "builtin" or "derived". Throws std::invalid_argument otherwise.
TemplateSource parse_template_source(std::string_view text);

/// Template of the requested depth. For m4 with sqrt(a) outside Q(sqrt 2) the
/// a = 1 template is used with scale (a, 2).
AsymptoticTemplate template_for(const MapSpec& map, int depth, TemplateSource source);

struct EstimateRequest {
  std::string map_id;
  ScalarExpr x0 = ScalarExpr::from_integer(0);
  std::optional<ScalarExpr> a;
  std::uint64_t n = 1'000'000;
  Precision precision = kDefaultPrecision;
  int depth = 4;
  TemplateSource source = TemplateSource::Derived;
  EngineLimits limits;

  /// Throws std::invalid_argument unless N >= 100, precision >= 128, 2 <= depth <= 6.
  void validate() const;
};

struct NewtonSolution {
  BigFloat c;
  int iterations = 0;
  /// |S(k; C) - x_k| at the solution.
  BigFloat residual;
};

/// Solves S(k; C) = x_k by Newton from the linear-in-C start. Stops when
/// |dC| < 2^(-prec/2); throws ConvergenceError after 50 iterations.
NewtonSolution solve_constant(const AsymptoticTemplate& t, std::uint64_t k, const BigFloat& xk, Precision prec);

struct EstimateResult {
  std::string map_id;
  std::string x0;
  std::optional<std::string> a;
  std::uint64_t n = 0;
  Precision precision = 0;
  int depth = 0;
  TemplateSource source = TemplateSource::Derived;
  BigFloat c;
  /// Estimate from the checkpoint N/2.
  BigFloat c_half;
  BigFloat error_bar;
  BigFloat residual_at_n;
  int newton_iterations = 0;
  std::int64_t runtime_millis = 0;
  /// "[no reference]" for maps without a published constant.
  std::optional<std::string> note;

  /// Decimal places that exceed the error bar.
  int reported_decimals() const;
  /// C truncated to reported_decimals().
  std::string c_text() const;
  std::string error_bar_text() const;
  std::string residual_text() const;
};

EstimateResult estimate_constant(const EstimateRequest& req);

/// Estimate from an existing trajectory that has a checkpoint at N/2.
EstimateResult estimate_from_trajectory(const EstimateRequest& req, const AsymptoticTemplate& t,
                                        const Trajectory& trajectory);

/// C(a, b) for a in {1/2, 1, 2} (rows) and b in {1/sqrt2, 1, sqrt2} (columns).
struct ConstantTable {
  std::vector<std::string> a_labels;
  std::vector<std::string> b_labels;
  std::vector<std::vector<EstimateResult>> cells;
  /// Column of the smallest value in each row.
  std::vector<std::size_t> row_min;

  const EstimateResult& at(std::size_t row, std::size_t col) const { return cells.at(row).at(col); }
  bool starred(std::size_t row, std::size_t col) const { return row_min.at(row) == col; }
};

ConstantTable build_table(std::uint64_t n, Precision prec, TemplateSource source = TemplateSource::Derived);

struct CheckEntry {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckEntry> entries;

  bool passed() const;
  void add(std::string name, bool passed, std::string detail);
};

/// Numeric relations between table cells, each at absolute tolerance `tolerance`.
CheckReport verify_table_identities(const ConstantTable& table, double tolerance = 1e-10);

/// Published C(a, b) values in the layout of ConstantTable.
struct ReferenceTable {
  std::vector<std::vector<std::string>> values;
  std::vector<std::size_t> starred;
};

const ReferenceTable& reference_table();

/// True when `value` rounded to the decimals of `cited` reproduces `cited`.
bool matches_cited(const BigFloat& value, std::string_view cited);

/// Cells against reference_table() at `tolerance`, the starred minima, and
/// the cross-checks 1/2 C(2,1) ~ 0.538934322 and 2 C(1/2,sqrt2) - 1/2 ~ 1.36157
/// at their cited precision.
CheckReport verify_table(const ConstantTable& table, double tolerance = 1e-10);

struct ExactIdentityOptions {
  /// Requested k range for the m4 sequence relations.
  std::uint64_t m4_k = 30;
  std::uint64_t m4_digits = 250'000;
  /// Requested k range for the logistic conjugacies.
  std::uint64_t logistic_k = 25;
  std::uint64_t logistic_digits = 30'000'000;
  /// Requested k range for the m2 conjugacy.
  std::uint64_t m2_k = 20;
  std::uint64_t m2_digits = 10'000'000;
};

/// Exact sequence-level relations. Each entry compares exact iterates up to
/// the requested k or the digit cap, and checks the exact rational-function
/// identity that carries the relation to every k.
CheckReport verify_exact_identities(const ExactIdentityOptions& options = {});

/// Table identities plus the exact relations.
CheckReport verify_identities(Precision prec, std::uint64_t n, TemplateSource source = TemplateSource::Derived);

/// Closed-form oracle maps against exact iteration, and float/exact agreement.
CheckReport check_oracles(Precision prec);

/// cf and bcf limits at `prec`; Newton products at max(prec, 512); dn2/dn3 convergence.
CheckReport check_classical_limits(Precision prec);

/// |x_k - S(k; C)| for k = 10^3, 10^4, ... up to N, with C fitted at N from
/// a derived template two blocks deeper (at most 6).
struct ResidualScan {
  BigFloat c;
  std::vector<std::pair<std::uint64_t, BigFloat>> rows;
};

ResidualScan residual_scan(const EstimateRequest& req);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingOptions {
  std::uint64_t n = 1'000'000;
  Precision precision = kDefaultPrecision;
  double slope_tolerance = 0.3;
  /// Builtin and derived estimates must agree to 2^-independence_bits.
  long independence_bits = 120;
};

/// Residual slopes, error-bar shrinkage and template-source independence for
/// m1 (x0=1/2), m2 (x0=0), m3 (x0=1/2) and m4 (a=1, x0=1).
CheckReport check_scaling_properties(const ScalingOptions& options = {});

}  // namespace mapconst
