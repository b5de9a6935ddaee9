#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mapconst/estimator.hpp"
#include "mapconst/symbolic.hpp"

namespace mapconst {

inline constexpr std::string_view kToolName = "mapconst";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum class Format { Json, Markdown, Csv };

std::string to_string(Format format);
/// "json", "md" or "csv". Throws std::invalid_argument otherwise.
Format parse_format(std::string_view text);

/// Wall-clock time to embed in a report; absent keeps output reproducible.
using Timing = std::optional<std::int64_t>;

std::string render_estimate(const EstimateRequest& req, const EstimateResult& result, Format format,
                            const Timing& millis);

std::string render_table(std::uint64_t n, Precision prec, TemplateSource source, const ConstantTable& table,
                         Format format, const Timing& millis);

/// Each check as one row, followed by the pass count.
std::string render_checks(const CheckReport& report, Format format, const Timing& millis);

/// CSV rows are `k,abs_residual` with 20 significant digits.
std::string render_residual(const EstimateRequest& req, const ResidualScan& scan, Format format,
                            const Timing& millis);

/// Coefficient value in the usual display; multiples of sqrt2 print as
/// `(...)·(1/sqrt2)`.
std::string display_coefficient(const CoefficientPoly& coeff);

/// Canonical listing, named coefficients, consistency lines and, when
/// `check` is given, the builtin comparison ending in "builtin match: ...".
/// Without a format the listing is plain text; Markdown fences it.
std::string render_derivation(const Derivation& derivation, const std::optional<TemplateComparison>& check,
                              std::optional<Format> format);

}  // namespace mapconst
