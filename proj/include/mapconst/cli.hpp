#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mapconst/bigfloat.hpp"
#include "mapconst/errors.hpp"
#include "mapconst/estimator.hpp"
#include "mapconst/report.hpp"

namespace mapconst {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad flags or flag combinations.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Process settings read from MAPCONST_PRECISION and MAPCONST_TIMING.
struct CliEnvironment {
  std::optional<std::string> precision;
  bool timing = false;

  static CliEnvironment from_process();
};

struct CliConfig {
  std::string subcommand;
  std::string map_id;
  std::optional<std::string> x0;
  std::optional<std::string> a;
  std::uint64_t n = 1'000'000;
  Precision precision = kDefaultPrecision;
  int depth = 4;
  /// Absent selects the subcommand default: the plain listing for derive,
  /// CSV for residual output, JSON otherwise.
  std::optional<Format> format;
  std::optional<std::string> out;
  bool check = false;
  std::string suite;
  TemplateSource source = TemplateSource::Derived;
  bool timing = false;
};

/// Decimal count or mantissa-exponent form such as "1e6". Throws UsageError.
std::uint64_t parse_count(std::string_view text);

/// Parses the arguments after the program name. Returns nullopt after
/// printing help. Throws UsageError.
std::optional<CliConfig> parse_cli(const std::vector<std::string>& args, const CliEnvironment& env,
                                   std::ostream& out);

/// Runs one subcommand and returns the exit code: 0 success, 1 computation
/// or tolerance failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& env = CliEnvironment::from_process());

}  // namespace mapconst
