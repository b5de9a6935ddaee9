#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mapconst/log_laurent.hpp"
#include "mapconst/map_spec.hpp"
#include "mapconst/series.hpp"

namespace mapconst {

/// Outcome of one matched equation.
struct SlotRecord {
  enum class Status { Solved, IdenticallySatisfied };

  int stage = 0;
  Rational exponent;
  int log_power = 0;
  Status status = Status::Solved;
  /// Unknown determined by this equation, e.g. "U[2,1]".
  std::string unknown;
};

struct ConsistencyReport {
  /// Leading behaviour, e.g. "1/2*k^(-1)".
  std::string leading;
  std::optional<TemplateScale> scale;
  std::vector<SlotRecord> slots;
  /// The free constant enters no first-block equation.
  bool free_constant_unconstrained = false;
  /// The first-block equation at the top log power reduces to 0 = 0.
  bool free_slot_identically_zero = false;
  /// S(k+1) - f(S(k)) vanishes for every exponent up to this one.
  Rational checked_through = 0;
  bool residual_vanishes = false;

  bool ok() const { return free_constant_unconstrained && free_slot_identically_zero && residual_vanishes; }
  std::string str() const;
};

struct Derivation {
  AsymptoticTemplate tmpl;
  ConsistencyReport report;
};

/// Builds the ansatz offset + c k^(-e0) + blocks of unknowns, expands
/// S(k+1) - f(S(k)) exactly and solves the triangular system block by block.
/// Depth counts exponent blocks including the leading one (2..6).
/// Throws TemplateError for maps without an expansion or with a parameter
/// outside Q(sqrt 2), DerivationError when matching fails.
Derivation derive_coefficients(const MapSpec& map, int depth);

/// Term-by-term comparison of two templates.
struct TemplateComparison {
  bool match = true;
  /// One line per offending (e, j) slot.
  std::vector<std::string> mismatches;
  std::optional<std::pair<Rational, int>> first_mismatch;
};

TemplateComparison compare_templates(const AsymptoticTemplate& expected, const AsymptoticTemplate& actual);

/// Compares builtin_template(map) with the derived depth-4 template.
TemplateComparison verify_builtin(const MapSpec& map);

/// s(k+1) through exponent e_max; the grid of s must contain e_max.
LogLaurentSeries shift_expand(const LogLaurentSeries& s, const Rational& e_max);

/// The map's step applied to s through exponent e_max. Maps whose step
/// depends on the initial condition are rejected with std::invalid_argument.
LogLaurentSeries apply_map(const MapSpec& map, const LogLaurentSeries& s, const Rational& e_max);

}  // namespace mapconst
