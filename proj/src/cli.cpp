#include "mapconst/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "mapconst/errors.hpp"
#include "mapconst/map_spec.hpp"
#include "mapconst/symbolic.hpp"

namespace mapconst {

namespace {

const std::vector<std::string> kSuites = {"table", "identities", "oracles", "limits", "residual", "properties"};

bool all_digits(std::string_view text) {
  return !text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::uint64_t checked_power(std::uint64_t mantissa, std::uint64_t exponent, std::string_view text) {
  std::uint64_t value = mantissa;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (value > std::numeric_limits<std::uint64_t>::max() / 10) throw UsageError("count too large: " + std::string(text));
    value *= 10;
  }
  return value;
}

std::uint64_t to_u64(std::string_view digits, std::string_view text) {
  std::uint64_t value = 0;
  for (char c : digits) {
    const auto d = static_cast<std::uint64_t>(c - '0');
    if (value > (std::numeric_limits<std::uint64_t>::max() - d) / 10) {
      throw UsageError("count too large: " + std::string(text));
    }
    value = value * 10 + d;
  }
  return value;
}

Precision parse_precision(std::string_view text, std::string_view source) {
  if (!all_digits(text) || text.size() > 9) {
    throw UsageError(std::string(source) + " must be a positive integer, got '" + std::string(text) + "'");
  }
  return static_cast<Precision>(to_u64(text, text));
}

/// Opens the --out target up front so a bad path is a usage error.
class Output {
 public:
  Output(const std::optional<std::string>& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path) return;
    file_.open(*path, std::ios::out | std::ios::trunc);
    if (!file_) throw UsageError("cannot open output file '" + *path + "'");
    stream_ = &file_;
  }

  void write(const std::string& text) {
    *stream_ << text;
    stream_->flush();
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::optional<ScalarExpr> parse_optional(const std::optional<std::string>& text, const char* flag) {
  if (!text) return std::nullopt;
  try {
    return ScalarExpr::parse(*text);
  } catch (const ParseError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

MapSpec resolve_map(const CliConfig& cfg) {
  try {
    return make_map(cfg.map_id, parse_optional(cfg.a, "--a"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const DomainError& e) {
    throw UsageError(std::string("--a: ") + e.what());
  }
}

EstimateRequest make_request(const CliConfig& cfg, const MapSpec& map) {
  if (!map.derivable) throw UsageError("map '" + map.id + "' has no asymptotic template");
  if (!cfg.x0) throw UsageError("--x0 is required");
  EstimateRequest req;
  req.map_id = map.id;
  req.x0 = *parse_optional(cfg.x0, "--x0");
  req.a = parse_optional(cfg.a, "--a");
  req.n = cfg.n;
  req.precision = cfg.precision;
  req.depth = cfg.depth;
  req.source = cfg.source;
  try {
    req.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return req;
}

void validate_run_size(const CliConfig& cfg) {
  EstimateRequest probe;
  probe.map_id = "m1";
  probe.n = cfg.n;
  probe.precision = cfg.precision;
  probe.depth = cfg.depth;
  try {
    probe.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  Timing read(bool enabled) const {
    if (!enabled) return std::nullopt;
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

int cmd_estimate(const CliConfig& cfg, Output& output) {
  const EstimateRequest req = make_request(cfg, resolve_map(cfg));
  const Stopwatch clock;
  const EstimateResult result = estimate_constant(req);
  output.write(render_estimate(req, result, cfg.format.value_or(Format::Json), clock.read(cfg.timing)));
  return kExitSuccess;
}

int cmd_derive(const CliConfig& cfg, Output& output) {
  const MapSpec map = resolve_map(cfg);
  if (!map.derivable) throw UsageError("map '" + map.id + "' has no template support");
  if (cfg.depth < 2 || cfg.depth > 6) throw UsageError("--depth must be between 2 and 6");
  if (cfg.check && !map.has_builtin_template) throw UsageError("--check needs a builtin template; '" + map.id + "' has none");
  const Derivation derivation = derive_coefficients(map, cfg.depth);
  std::optional<TemplateComparison> check;
  if (cfg.check) {
    const int depth = std::min(cfg.depth, 4);
    check = compare_templates(builtin_template(map, depth), derivation.tmpl.truncated(depth));
  }
  output.write(render_derivation(derivation, check, cfg.format));
  const bool ok = derivation.report.ok() && (!check || check->match);
  return ok ? kExitSuccess : kExitFailure;
}

int cmd_table(const CliConfig& cfg, Output& output) {
  validate_run_size(cfg);
  const Stopwatch clock;
  const ConstantTable table = build_table(cfg.n, cfg.precision, cfg.source);
  output.write(render_table(cfg.n, cfg.precision, cfg.source, table, cfg.format.value_or(Format::Json),
                            clock.read(cfg.timing)));
  return kExitSuccess;
}

int cmd_residual(const CliConfig& cfg, Output& output) {
  const EstimateRequest req = make_request(cfg, resolve_map(cfg));
  const Stopwatch clock;
  const ResidualScan scan = residual_scan(req);
  output.write(render_residual(req, scan, cfg.format.value_or(Format::Csv), clock.read(cfg.timing)));
  return kExitSuccess;
}

int cmd_verify(const CliConfig& cfg, Output& output) {
  if (cfg.suite == "residual") {
    CliConfig scan = cfg;
    if (scan.map_id.empty()) {
      scan.map_id = "m1";
      if (!scan.x0) scan.x0 = "1/2";
    }
    return cmd_residual(scan, output);
  }
  validate_run_size(cfg);
  const Stopwatch clock;
  CheckReport report;
  if (cfg.suite == "table") {
    report = verify_table(build_table(cfg.n, cfg.precision, cfg.source));
  } else if (cfg.suite == "identities") {
    report = verify_identities(cfg.precision, cfg.n, cfg.source);
  } else if (cfg.suite == "oracles") {
    report = check_oracles(cfg.precision);
  } else if (cfg.suite == "limits") {
    report = check_classical_limits(cfg.precision);
  } else {
    ScalingOptions options;
    options.n = cfg.n;
    options.precision = cfg.precision;
    report = check_scaling_properties(options);
  }
  output.write(render_checks(report, cfg.format.value_or(Format::Json), clock.read(cfg.timing)));
  return report.passed() ? kExitSuccess : kExitFailure;
}

}  // namespace

CliEnvironment CliEnvironment::from_process() {
  CliEnvironment env;
  if (const char* p = std::getenv("MAPCONST_PRECISION"); p != nullptr && *p != '\0') env.precision = p;
  if (const char* t = std::getenv("MAPCONST_TIMING"); t != nullptr) env.timing = *t != '\0' && std::string(t) != "0";
  return env;
}

std::uint64_t parse_count(std::string_view text) {
  const auto e = text.find_first_of("eE");
  if (e == std::string_view::npos) {
    if (!all_digits(text)) throw UsageError("expected a count, got '" + std::string(text) + "'");
    return to_u64(text, text);
  }
  const auto mantissa = text.substr(0, e);
  const auto exponent = text.substr(e + 1);
  if (!all_digits(mantissa) || !all_digits(exponent) || exponent.size() > 2) {
    throw UsageError("expected a count such as 1000000 or 1e6, got '" + std::string(text) + "'");
  }
  return checked_power(to_u64(mantissa, text), to_u64(exponent, text), text);
}

std::optional<CliConfig> parse_cli(const std::vector<std::string>& args, const CliEnvironment& env,
                                   std::ostream& out) {
  CliConfig cfg;
  if (env.precision) cfg.precision = parse_precision(*env.precision, "MAPCONST_PRECISION");
  cfg.timing = env.timing;

  CLI::App app{"Asymptotic constants of iterated maps", std::string(kToolName)};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string n_text;
  std::optional<Precision> precision_flag;
  std::string format_text;
  std::string out_path;
  std::string template_text = "derived";
  std::string x0_text;
  std::string a_text;

  auto add_run_size = [&](CLI::App* sub) {
    sub->add_option("--N", n_text, "Iteration count (e.g. 1000000 or 1e6)");
    sub->add_option("--precision", precision_flag, "Working precision in bits")->check(CLI::PositiveNumber);
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", format_text, "Output format")->check(CLI::IsMember({"json", "md", "csv"}));
    sub->add_option("--out", out_path, "Output file (default: standard output)");
  };
  auto add_template = [&](CLI::App* sub) {
    sub->add_option("--template", template_text, "Template source")->check(CLI::IsMember({"derived", "builtin"}));
  };
  auto add_point = [&](CLI::App* sub, bool map_required) {
    auto* map = sub->add_option("--map", cfg.map_id, "Map id");
    if (map_required) map->required();
    sub->add_option("--x0", x0_text, "Initial condition");
    sub->add_option("--a", a_text, "Map parameter (m4)");
    sub->add_option("--depth", cfg.depth, "Exponent blocks in the template (2..6)");
  };

  CLI::App* estimate = app.add_subcommand("estimate", "Estimate the constant C for one initial condition");
  add_point(estimate, true);
  add_run_size(estimate);
  add_template(estimate);
  add_output(estimate);

  CLI::App* derive = app.add_subcommand("derive", "Derive the expansion coefficients by coefficient matching");
  derive->add_option("--map", cfg.map_id, "Map id")->required();
  derive->add_option("--a", a_text, "Map parameter (m4)");
  derive->add_option("--depth", cfg.depth, "Exponent blocks (2..6)");
  derive->add_flag("--check", cfg.check, "Compare with the builtin template");
  add_output(derive);

  CLI::App* table = app.add_subcommand("table", "C(a, b) for m4 with a in {1/2, 1, 2} and b in {1/sqrt(2), 1, sqrt(2)}");
  add_run_size(table);
  add_template(table);
  add_output(table);

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", cfg.suite, "Suite")->required()->check(CLI::IsMember(kSuites));
  add_point(verify, false);
  add_run_size(verify);
  add_template(verify);
  add_output(verify);

  CLI::App* residual = app.add_subcommand("residual", "|x_k - S(k; C)| at k = 10^3, 10^4, ... up to N");
  add_point(residual, true);
  add_run_size(residual);
  add_template(residual);
  add_output(residual);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (CLI::App* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  if (!n_text.empty()) cfg.n = parse_count(n_text);
  if (precision_flag) cfg.precision = *precision_flag;
  if (!format_text.empty()) cfg.format = parse_format(format_text);
  if (!out_path.empty()) cfg.out = out_path;
  if (!x0_text.empty()) cfg.x0 = x0_text;
  if (!a_text.empty()) cfg.a = a_text;
  cfg.source = parse_template_source(template_text);
  return cfg;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliEnvironment& env) {
  try {
    const std::optional<CliConfig> cfg = parse_cli(args, env, out);
    if (!cfg) return kExitSuccess;
    Output output(cfg->out, out);
    const std::map<std::string, std::function<int(const CliConfig&, Output&)>> commands = {
        {"estimate", cmd_estimate}, {"derive", cmd_derive}, {"table", cmd_table},
        {"verify", cmd_verify},     {"residual", cmd_residual}};
    return commands.at(cfg->subcommand)(*cfg, output);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace mapconst
