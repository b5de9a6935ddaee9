#include "mapconst/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "mapconst/errors.hpp"
#include "mapconst/ratfunc.hpp"
#include "mapconst/symbolic.hpp"

namespace mapconst {
namespace {

constexpr int kMaxNewtonIterations = 50;
constexpr int kMaxDepth = 6;

BigFloat decimal_bound(const char* text, Precision prec) { return BigFloat::from_string(text, prec); }

std::string sci(const BigFloat& x, int digits = 6) { return x.to_scientific(digits); }

bool sqrt_a_exact(const MapSpec& map) {
  const auto a = map.qsqrt2_a();
  return a && a->sqrt().has_value();
}

std::optional<std::string> note_for(const MapSpec& map) {
  if (!map.has_builtin_template) return std::string("[no reference]");
  return std::nullopt;
}

ScalarExpr expr(std::string_view text) { return ScalarExpr::parse(text); }

/// Exact values k = 0..reached of a run, with the cap recorded.
template <class F>
ExactRun<F> exact_run(const MapSpec& map, const F& x0, std::uint64_t k, std::uint64_t digits) {
  EngineLimits limits;
  limits.max_digits = digits;
  return run_exact(map, x0, k, limits);
}

std::string reach_text(std::uint64_t reached, std::uint64_t requested, bool capped, std::uint64_t digits) {
  std::string out = "exact through k=" + std::to_string(reached);
  if (capped && reached < requested) {
    out += " (requested " + std::to_string(requested) + ", digit cap " + std::to_string(digits) + ")";
  }
  return out;
}

}  // namespace

std::string to_string(TemplateSource source) { return source == TemplateSource::Builtin ? "builtin" : "derived"; }

TemplateSource parse_template_source(std::string_view text) {
  if (text == "builtin") return TemplateSource::Builtin;
  if (text == "derived") return TemplateSource::Derived;
  throw std::invalid_argument("template source must be 'builtin' or 'derived', got '" + std::string(text) + "'");
}

AsymptoticTemplate template_for(const MapSpec& map, int depth, TemplateSource source) {
  if (map.id == "m4" && !sqrt_a_exact(map)) {
    AsymptoticTemplate base = template_for(make_map("m4"), depth, source);
    base.parameter = map.a->text();
    base.scale = TemplateScale{*map.a, 2};
    return base;
  }
  if (source == TemplateSource::Builtin) {
    if (!map.has_builtin_template) throw TemplateError("map '" + map.id + "' has no builtin template");
    return builtin_template(map, depth);
  }
  return derive_coefficients(map, depth).tmpl;
}

void EstimateRequest::validate() const {
  if (n < 100) throw std::invalid_argument("N must be at least 100");
  if (precision < 128) throw std::invalid_argument("precision must be at least 128 bits");
  if (depth < 2 || depth > kMaxDepth) throw std::invalid_argument("depth must lie in [2, 6]");
}

NewtonSolution solve_constant(const AsymptoticTemplate& t, std::uint64_t k, const BigFloat& xk, Precision prec) {
  const Precision work = prec + kGuardBits;
  CollapsedTemplate g = collapse(t, k, work);
  if (g.coeffs.size() < 2 || g.coeffs[1].is_zero()) throw TemplateError("template does not depend on C");
  const BigFloat x = xk.rounded(work);
  g.coeffs[0] -= x;
  NewtonSolution out;
  out.c = -g.coeffs[0] / g.coeffs[1];
  const BigFloat tol = power_of_two(-static_cast<long>(prec / 2), work);
  std::vector<std::string> history;
  bool converged = false;
  while (out.iterations < kMaxNewtonIterations) {
    const BigFloat d = g.derivative(out.c);
    if (d.is_zero()) throw ConvergenceError("Newton: zero derivative at C = " + sci(out.c, 20));
    const BigFloat delta = g.value(out.c) / d;
    out.c -= delta;
    ++out.iterations;
    history.push_back(sci(out.c, 20));
    if (history.size() > 3) history.erase(history.begin());
    if (abs(delta) < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::string last;
    for (const auto& h : history) last += (last.empty() ? "" : ", ") + h;
    throw ConvergenceError("Newton did not converge in " + std::to_string(kMaxNewtonIterations) +
                           " iterations; last iterates " + last);
  }
  out.residual = abs(g.value(out.c)).rounded(prec);
  out.c = out.c.rounded(prec);
  return out;
}

int EstimateResult::reported_decimals() const {
  const int cap = static_cast<int>(std::floor(static_cast<double>(precision - 8) * std::log10(2.0)));
  if (error_bar.is_zero()) return cap;
  const Precision p = error_bar.precision();
  const double lg = (log(error_bar) / log(BigFloat(10, p))).to_double();
  const int d = static_cast<int>(std::floor(-lg));
  return std::clamp(d, 0, cap);
}

std::string EstimateResult::c_text() const { return c.to_fixed_truncated(reported_decimals()); }

std::string EstimateResult::error_bar_text() const { return sci(error_bar, 3); }

std::string EstimateResult::residual_text() const { return sci(residual_at_n, 6); }

EstimateResult estimate_from_trajectory(const EstimateRequest& req, const AsymptoticTemplate& t,
                                        const Trajectory& trajectory) {
  const MapSpec map = make_map(req.map_id, req.a);
  const std::uint64_t half = req.n / 2;
  const NewtonSolution full = solve_constant(t, req.n, trajectory.final_value, req.precision);
  const NewtonSolution part = solve_constant(t, half, trajectory.at(half), req.precision);
  EstimateResult r;
  r.map_id = req.map_id;
  r.x0 = req.x0.text();
  if (req.a) r.a = req.a->text();
  r.n = req.n;
  r.precision = req.precision;
  r.depth = req.depth;
  r.source = req.source;
  r.c = full.c;
  r.c_half = part.c;
  r.error_bar = abs(full.c - part.c);
  r.residual_at_n = full.residual;
  r.newton_iterations = full.iterations;
  r.note = note_for(map);
  return r;
}

EstimateResult estimate_constant(const EstimateRequest& req) {
  req.validate();
  const auto start = std::chrono::steady_clock::now();
  const MapSpec map = make_map(req.map_id, req.a);
  const AsymptoticTemplate t = template_for(map, req.depth, req.source);
  const Trajectory traj = iterate(map, req.x0, req.n, req.precision, {req.n / 2}, req.limits);
  EstimateResult r = estimate_from_trajectory(req, t, traj);
  r.runtime_millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ConstantTable build_table(std::uint64_t n, Precision prec, TemplateSource source) {
  ConstantTable table;
  table.a_labels = {"1/2", "1", "2"};
  table.b_labels = {"1/sqrt(2)", "1", "sqrt(2)"};
  for (const auto& a : table.a_labels) {
    const MapSpec map = make_map("m4", expr(a));
    const AsymptoticTemplate t = template_for(map, 4, source);
    std::vector<EstimateResult> row;
    for (const auto& b : table.b_labels) {
      EstimateRequest req;
      req.map_id = "m4";
      req.a = expr(a);
      req.x0 = expr(b);
      req.n = n;
      req.precision = prec;
      req.source = source;
      req.validate();
      const auto start = std::chrono::steady_clock::now();
      const Trajectory traj = iterate(map, req.x0, n, prec, {n / 2});
      EstimateResult r = estimate_from_trajectory(req, t, traj);
      r.runtime_millis =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      row.push_back(std::move(r));
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j].c < row[best].c) best = j;
    }
    table.row_min.push_back(best);
    table.cells.push_back(std::move(row));
  }
  return table;
}

bool CheckReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.passed; });
}

void CheckReport::add(std::string name, bool passed, std::string detail) {
  entries.push_back(CheckEntry{std::move(name), passed, std::move(detail)});
}

CheckReport verify_table_identities(const ConstantTable& table, double tolerance) {
  CheckReport report;
  report.suite = "identities";
  const Precision p = table.at(0, 0).c.precision();
  const BigFloat tol(mpq_class(tolerance), p);
  const BigFloat a_val[3] = {BigFloat(mpq_class(1, 2), p), BigFloat(1, p), BigFloat(2, p)};
  const BigFloat s2 = sqrt(BigFloat(2, p));
  const BigFloat b_val[3] = {1 / s2, BigFloat(1, p), s2};
  auto c = [&](int i, int j) -> const BigFloat& { return table.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).c; };
  auto label = [&](int i, int j) {
    return "C(" + table.a_labels[static_cast<std::size_t>(i)] + "," + table.b_labels[static_cast<std::size_t>(j)] + ")";
  };
  auto check = [&](const std::string& name, const BigFloat& lhs, const BigFloat& rhs) {
    const BigFloat diff = abs(lhs - rhs);
    report.add(name, diff <= tol, "|diff| = " + sci(diff, 3));
  };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      check(label(i, j) + " = a*" + label(2 - i, 2 - j), c(i, j), a_val[i] * c(2 - i, 2 - j));
    }
  }
  check(label(0, 0) + " = sqrt(1/2)*C(1,1)", c(0, 0), b_val[0] * c(1, 1));
  check(label(2, 2) + " = sqrt(2)*C(1,1)", c(2, 2), b_val[2] * c(1, 1));
  check(label(1, 0) + " = b*" + label(2, 1), c(1, 0), b_val[0] * c(2, 1));
  check(label(1, 2) + " = b*" + label(0, 1), c(1, 2), b_val[2] * c(0, 1));
  check(label(0, 0) + " = " + label(0, 2) + " - 1/2", c(0, 0), c(0, 2) - BigFloat(mpq_class(1, 2), p));
  check(label(2, 0) + " = " + label(2, 2) + " + 1", c(2, 0), c(2, 2) + 1);
  return report;
}

const ReferenceTable& reference_table() {
  static const ReferenceTable table{
      {{"0.430785593784355", "0.538934324436812", "0.930785593784355"},
       {"0.762168230846922", "0.609222829204782", "0.762168230846922"},
       {"1.861571187568711", "1.077868648873625", "0.861571187568711"}},
      {0, 1, 2}};
  return table;
}

bool matches_cited(const BigFloat& value, std::string_view cited) {
  const auto point = cited.find('.');
  const int decimals = point == std::string_view::npos ? 0 : static_cast<int>(cited.size() - point - 1);
  return value.to_fixed(decimals) == cited;
}

CheckReport verify_table(const ConstantTable& table, double tolerance) {
  CheckReport report;
  report.suite = "table";
  const ReferenceTable& ref = reference_table();
  const Precision p = table.at(0, 0).c.precision();
  const BigFloat tol(mpq_class(tolerance), p);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const std::string name = "C(" + table.a_labels[i] + "," + table.b_labels[j] + ")";
      const BigFloat diff = abs(table.at(i, j).c - decimal_bound(ref.values[i][j].c_str(), p));
      report.add(name + " vs " + ref.values[i][j], diff <= tol, "|diff| = " + sci(diff, 3));
    }
    report.add("row a=" + table.a_labels[i] + " minimum", table.row_min[i] == ref.starred[i],
               "starred b=" + table.b_labels[table.row_min[i]]);
  }
  const BigFloat half_c21 = table.at(2, 1).c * BigFloat(mpq_class(1, 2), p);
  report.add("1/2 C(2,1) ~ 0.538934322", matches_cited(half_c21, "0.538934322"),
             "computed " + half_c21.to_fixed(12));
  const BigFloat shifted = table.at(0, 2).c * 2 - BigFloat(mpq_class(1, 2), p);
  report.add("2 C(1/2,sqrt(2)) - 1/2 ~ 1.36157", matches_cited(shifted, "1.36157"), "computed " + shifted.to_fixed(12));
  return report;
}

CheckReport verify_exact_identities(const ExactIdentityOptions& options) {
  CheckReport report;
  report.suite = "identities";
  const RatFunc x = RatFunc::variable();
  const QSqrt2 r2 = QSqrt2::sqrt2();
  const std::vector<std::pair<std::string, QSqrt2>> bs = {
      {"1/sqrt(2)", r2.inverse()}, {"1", QSqrt2(1)}, {"sqrt(2)", r2}};

  for (const char* a_text : {"1/2", "1", "2"}) {
    const Rational a = parse_rational(a_text);
    const Rational inv_a = 1 / a;
    const MapSpec ua = make_map("m4", expr(a_text));
    const MapSpec va = make_map("m4", expr(to_string(inv_a)));
    const bool algebraic = step_function(va).compose(x * RatFunc(inv_a)) == step_function(ua) * RatFunc(inv_a);
    for (const auto& [b_text, b] : bs) {
      const auto u = exact_run(ua, b, options.m4_k, options.m4_digits);
      const auto v = exact_run(va, b.inverse(), options.m4_k, options.m4_digits);
      const std::uint64_t reach = std::min(u.reached(), v.reached());
      bool equal = reach >= 1;
      for (std::uint64_t k = 1; k <= reach && equal; ++k) equal = v.values[k] == u.values[k] * QSqrt2(inv_a);
      report.add("v_k = u_k/a (a=" + std::string(a_text) + ", b=" + b_text + ")", algebraic && equal,
                 reach_text(reach, options.m4_k, u.capped || v.capped, options.m4_digits) +
                     "; g_{1/a}(x/a) = g_a(x)/a " + (algebraic ? "holds" : "fails"));
    }
  }

  {
    const MapSpec m = make_map("m4", expr("2"));
    const auto u = exact_run(m, r2.inverse(), options.m4_k + 1, options.m4_digits);
    const auto v = exact_run(m, r2, options.m4_k + 1, options.m4_digits);
    const std::uint64_t reach = std::min(u.reached(), v.reached() == 0 ? 0 : v.reached() - 1);
    bool equal = reach >= 1;
    for (std::uint64_t k = 1; k <= reach && equal; ++k) equal = u.values[k] == v.values[k + 1];
    report.add("u_k = v_{k+1} (a=2, u_0=1/sqrt(2), v_0=sqrt(2))", equal,
               reach_text(reach, options.m4_k, u.capped || v.capped, options.m4_digits) +
                   "; u_1 = v_2 and both follow the same map");
  }
  {
    const MapSpec m = make_map("m4", expr("1/2"));
    const auto u = exact_run(m, r2.inverse(), options.m4_k + 1, options.m4_digits);
    const auto v = exact_run(m, r2, options.m4_k + 1, options.m4_digits);
    const std::uint64_t reach = std::min(u.reached() == 0 ? 0 : u.reached() - 1, v.reached());
    bool equal = u.reached() >= 1;
    for (std::uint64_t k = 0; k <= reach && equal; ++k) equal = u.values[k + 1] == v.values[k];
    report.add("u_{k+1} = v_k (a=1/2, u_0=1/sqrt(2), v_0=sqrt(2))", equal,
               reach_text(reach, options.m4_k, u.capped || v.capped, options.m4_digits) +
                   "; u_1 = v_0 and both follow the same map");
  }

  // Fraction-free runs: equality x = alpha + beta*y of A/B and C/D is A*D = (alpha*D + beta*C)*B.
  auto affine_match = [](const ProjectiveRun& xs, const ProjectiveRun& ys, long alpha, long beta, bool reciprocal) {
    const std::uint64_t reach = std::min(xs.reached(), ys.reached());
    for (std::uint64_t k = 0; k <= reach; ++k) {
      const auto& x = xs.values[k];
      ProjectiveValue y = ys.values[k];
      if (reciprocal) std::swap(y.num, y.den);
      const ProjectiveValue rhs{alpha * y.den + beta * y.num, y.den};
      if (!same_value(x, rhs)) return false;
    }
    return true;
  };
  auto limits_for = [](std::uint64_t digits) {
    EngineLimits limits;
    limits.max_digits = digits;
    return limits;
  };
  const MapSpec logistic = make_map("logistic");
  const RatFunc logistic_f = step_function(logistic);
  const EngineLimits logistic_limits = limits_for(options.logistic_digits);
  const auto eta = run_projective(logistic, Rational(1, 2), options.logistic_k, logistic_limits);
  {
    const MapSpec gw2 = make_auxiliary_map("gw2");
    const bool algebraic = step_function(gw2).compose(1 - 2 * x) == 1 - 2 * logistic_f;
    const auto xi = run_projective(gw2, Rational(0), options.logistic_k, logistic_limits);
    const std::uint64_t reach = std::min(xi.reached(), eta.reached());
    const bool equal = affine_match(xi, eta, 1, -2, false);
    report.add("xi_k = 1 - 2 eta_k", algebraic && equal,
               reach_text(reach, options.logistic_k, xi.capped || eta.capped, options.logistic_digits) +
                   "; gw2(1-2x) = 1-2x(1-x) " + (algebraic ? "holds" : "fails"));
  }
  {
    const MapSpec bk = make_map("bk");
    const bool algebraic = step_function(bk).compose(1 / x - 1) == 1 / logistic_f - 1;
    const auto b = run_projective(bk, Rational(1), options.logistic_k, logistic_limits);
    const std::uint64_t reach = std::min(b.reached(), eta.reached());
    const bool equal = affine_match(b, eta, -1, 1, true);
    report.add("b_k = 1/eta_k - 1", algebraic && equal,
               reach_text(reach, options.logistic_k, b.capped || eta.capped, options.logistic_digits) +
                   "; bk(1/x-1) = 1/(x(1-x))-1 " + (algebraic ? "holds" : "fails"));
  }
  {
    const MapSpec m2 = make_map("m2");
    const MapSpec m2y = make_auxiliary_map("m2y");
    const bool algebraic = step_function(m2).compose(1 - 3 * x) == 1 - 3 * step_function(m2y);
    const EngineLimits limits = limits_for(options.m2_digits);
    const auto xs = run_projective(m2, Rational(0), options.m2_k, limits);
    const auto ys = run_projective(m2y, Rational(1, 3), options.m2_k, limits);
    const std::uint64_t reach = std::min(xs.reached(), ys.reached());
    const bool equal = affine_match(xs, ys, 1, -3, false);
    report.add("x_k = 1 - 3 y_k", algebraic && equal,
               reach_text(reach, options.m2_k, xs.capped || ys.capped, options.m2_digits) +
                   "; m2(1-3y) = 1-3(y-3y^2+3y^3) " + (algebraic ? "holds" : "fails"));
  }
  return report;
}

CheckReport verify_identities(Precision prec, std::uint64_t n, TemplateSource source) {
  CheckReport report = verify_table_identities(build_table(n, prec, source));
  for (auto& e : verify_exact_identities().entries) report.entries.push_back(std::move(e));
  return report;
}

CheckReport check_oracles(Precision prec) {
  CheckReport report;
  report.suite = "oracles";
  const MapSpec rcf = make_map("rcf");
  for (const char* text : {"1", "2/3", "3/7"}) {
    const Rational x0 = parse_rational(text);
    const auto run = run_exact(rcf, x0, 1000);
    bool equal = run.reached() == 1000;
    for (std::uint64_t k = 0; k <= run.reached() && equal; ++k) {
      const Rational expected = x0 / (1 + Rational(static_cast<long>(k)) * x0 * x0);
      equal = run.values[k] == expected;
    }
    report.add(std::string("rcf x0=") + text + ": x_k = x0/(1+k x0^2), k <= 1000", equal,
               "exact through k=" + std::to_string(run.reached()));
  }
  const MapSpec sq = make_map("sq");
  for (const char* text : {"2", "1/2", "3/2"}) {
    const Rational x0 = parse_rational(text);
    const auto run = run_exact(sq, x0, 20);
    bool equal = run.reached() == 20;
    for (std::uint64_t k = 0; k <= run.reached() && equal; ++k) {
      const unsigned long e = 1UL << k;
      mpz_class num;
      mpz_class den;
      mpz_pow_ui(num.get_mpz_t(), x0.get_num_mpz_t(), e);
      mpz_pow_ui(den.get_mpz_t(), x0.get_den_mpz_t(), e);
      equal = run.values[k] == Rational(num, den);
    }
    report.add(std::string("sq x0=") + text + ": x_k = x0^(2^k), k <= 20", equal,
               "exact through k=" + std::to_string(run.reached()));
  }
  struct Case {
    const char* id;
    std::optional<const char*> a;
    const char* x0;
    std::uint64_t k;
  };
  const Case cases[] = {{"m1", std::nullopt, "1/2", 10}, {"m2", std::nullopt, "0", 8},
                        {"m3", std::nullopt, "1/2", 8},  {"m4", "1", "1", 16},
                        {"logistic", std::nullopt, "1/2", 14}, {"rcf", std::nullopt, "2/3", 200},
                        {"bk", std::nullopt, "1", 14}};
  for (const auto& cs : cases) {
    const MapSpec map = make_map(cs.id, cs.a ? std::optional<ScalarExpr>(expr(*cs.a)) : std::nullopt);
    const Rational exact = iterate_exact(map, parse_rational(cs.x0), cs.k);
    const BigFloat approx = iterate(map, expr(cs.x0), cs.k, prec).final_value;
    const BigFloat reference(exact, prec + kGuardBits);
    const BigFloat diff = abs(approx.rounded(prec + kGuardBits) - reference);
    const BigFloat bound = power_of_two(8 - static_cast<long>(prec), prec + kGuardBits) * abs(reference);
    report.add(std::string(cs.id) + " x0=" + cs.x0 + " k=" + std::to_string(cs.k) + ": |float - exact| <= 2^(8-P)|x|",
               diff <= bound, "|diff| = " + sci(diff, 3));
  }
  return report;
}

CheckReport check_classical_limits(Precision prec) {
  CheckReport report;
  report.suite = "limits";
  const BigFloat eps = decimal_bound("1e-30", prec);
  const BigFloat two(2, prec);
  auto converge = [&](const std::string& name, const MapSpec& map, const char* x0, const BigFloat& limit) {
    const BigFloat start = parse_scalar(x0, prec);
    Stepper stepper(map, prec, start);
    BigFloat x = start;
    std::optional<std::uint64_t> hit;
    for (std::uint64_t k = 0; k <= 100; ++k) {
      if (abs(x - limit) < eps) {
        hit = k;
        break;
      }
      stepper.advance(x, k);
    }
    report.add(name, hit.has_value(),
               hit ? "|x_k - L| < 1e-30 first at k=" + std::to_string(*hit) : "not within 1e-30 after 100 steps");
  };
  const BigFloat silver = sqrt(two) + 1;
  converge("cf x0=2 -> 1+sqrt(2)", make_map("cf"), "2", silver);
  {
    // Contraction factor of x -> 2 + 1/x at its fixed point is 1/L^2 = 3 - 2 sqrt(2).
    const MapSpec cf = make_map("cf");
    const BigFloat start(2, prec);
    Stepper stepper(cf, prec, start);
    BigFloat x = start;
    for (std::uint64_t k = 0; k < 20; ++k) stepper.advance(x, k);
    const BigFloat e20 = abs(x - silver);
    stepper.advance(x, 20);
    const BigFloat ratio = abs(x - silver) / e20;
    const BigFloat expected = 3 - sqrt(two) * 2;
    report.add("cf error ratio -> 3-2sqrt(2)", abs(ratio - expected) < decimal_bound("1e-6", prec),
               "ratio at k=20: " + sci(ratio, 10));
  }
  converge("bcf y0=3 -> 1+2^(1/3)+2^(2/3)", make_map("bcf"), "3", root(two, 3) + root(BigFloat(4, prec), 3) + 1);
  converge("dn2 x0=1/2 -> 1/sqrt(2)", make_map("dn2"), "1/2", 1 / sqrt(two));
  converge("dn3 y0=1/2 -> 1/sqrt(3)", make_map("dn3"), "1/2", 1 / sqrt(BigFloat(3, prec)));

  const Precision np = std::max<Precision>(prec, 512);
  auto newton = [&](const std::string& name, const MapSpec& map, long radicand, long base_int, long base_root) {
    const BigFloat s = sqrt(BigFloat(radicand, np));
    const BigFloat base = s * base_root + base_int;
    const BigFloat target = s * 2;
    BigFloat x(2, np);
    Stepper stepper(map, np, x);
    std::vector<BigFloat> products;
    bool closed_form = true;
    for (long n = 0; n <= 7; ++n) {
      const BigFloat r = pow(base, 1L << n);
      products.push_back((x - s) * r);
      // x_n - s = 2s / (R - 1) for x_0 = 2.
      const BigFloat exact = target * r / (r - 1);
      if (n <= 6) closed_form = closed_form && abs(products.back() - exact) / exact < decimal_bound("1e-40", np);
      stepper.advance(x, static_cast<std::uint64_t>(n));
    }
    const BigFloat rel6 = abs(products[6] - target) / target;
    report.add(name + " product at n=6 within 1e-20 of 2sqrt", rel6 < decimal_bound("1e-20", np),
               "relative error " + sci(rel6, 3));
    report.add(name + " product matches 2s R/(R-1) for n <= 6", closed_form, "P = " + std::to_string(np));
    bool quadratic = true;
    std::string ratios;
    for (std::size_t n = 1; n + 2 < products.size(); ++n) {
      const BigFloat d0 = abs(products[n] - products[n - 1]);
      const BigFloat d1 = abs(products[n + 1] - products[n]);
      const BigFloat q = d1 / (d0 * d0);
      ratios += (ratios.empty() ? "" : ", ") + sci(q, 4);
      quadratic = quadratic && q < 10;
    }
    report.add(name + " successive differences shrink quadratically", quadratic, "d_{n+1}/d_n^2: " + ratios);
  };
  newton("Newton sqrt(2)", make_map("ns2"), 2, 3, 2);
  newton("Newton sqrt(3)", make_map("ns3"), 3, 7, 4);
  return report;
}

ResidualScan residual_scan(const EstimateRequest& req) {
  req.validate();
  const MapSpec map = make_map(req.map_id, req.a);
  const AsymptoticTemplate shallow = template_for(map, req.depth, req.source);
  const AsymptoticTemplate deep = template_for(map, std::min(req.depth + 2, kMaxDepth), TemplateSource::Derived);
  std::vector<std::uint64_t> ks;
  for (std::uint64_t k = 1000; k <= req.n; k *= 10) ks.push_back(k);
  if (ks.empty() || ks.back() != req.n) ks.push_back(req.n);
  const Trajectory traj = iterate(map, req.x0, req.n, req.precision, ks, req.limits);
  ResidualScan scan;
  scan.c = solve_constant(deep, req.n, traj.final_value, req.precision).c;
  for (const auto k : ks) {
    const BigFloat s = eval_template(shallow, scan.c, k, req.precision + kGuardBits);
    scan.rows.emplace_back(k, abs(traj.at(k).rounded(req.precision + kGuardBits) - s).rounded(req.precision));
  }
  return scan;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0;
  double sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) throw std::invalid_argument("slope fit needs distinct abscissae");
  return sxy / sxx;
}

CheckReport check_scaling_properties(const ScalingOptions& options) {
  CheckReport report;
  report.suite = "properties";
  const Precision prec = options.precision;
  struct Case {
    const char* id;
    std::optional<const char*> a;
    const char* x0;
  };
  const Case cases[] = {{"m1", std::nullopt, "1/2"}, {"m2", std::nullopt, "0"}, {"m3", std::nullopt, "1/2"},
                        {"m4", "1", "1"}};
  const int depth = 4;
  std::vector<std::uint64_t> ks;
  for (std::uint64_t k = 1000; k <= options.n; k *= 10) ks.push_back(k);
  std::vector<std::uint64_t> fit_ns;
  for (std::uint64_t k = 10'000; k <= options.n; k *= 10) fit_ns.push_back(k);
  std::vector<std::uint64_t> checkpoints = ks;
  for (const auto n : fit_ns) checkpoints.push_back(n / 2);

  for (const auto& cs : cases) {
    const MapSpec map = make_map(cs.id, cs.a ? std::optional<ScalarExpr>(expr(*cs.a)) : std::nullopt);
    const std::string label = std::string(cs.id) + " x0=" + cs.x0;
    const AsymptoticTemplate t = template_for(map, depth, TemplateSource::Derived);
    const AsymptoticTemplate deep = template_for(map, kMaxDepth, TemplateSource::Derived);
    const Trajectory traj = iterate(map, expr(cs.x0), options.n, prec, checkpoints);
    const BigFloat c = solve_constant(deep, options.n, traj.final_value, prec).c;

    // First omitted block: exponent e0 + depth with log powers up to depth.
    const double expected = -(map.leading_exponent.get_d() + depth);
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto k : ks) {
      const BigFloat r = abs(traj.at(k) - eval_template(t, c, k, prec + kGuardBits));
      const double lk = std::log(static_cast<double>(k));
      lx.push_back(lk);
      ly.push_back(log(r).to_double() - depth * std::log(lk));
    }
    const double slope = fit_slope(lx, ly);
    std::ostringstream os;
    os << "slope " << slope << ", expected " << expected;
    report.add(label + ": residual slope (depth 4, log-corrected)", std::abs(slope - expected) <= options.slope_tolerance,
               os.str());

    std::vector<double> nx;
    std::vector<double> ny;
    for (const auto n : fit_ns) {
      const BigFloat c_n = solve_constant(t, n, traj.at(n), prec).c;
      const BigFloat c_h = solve_constant(t, n / 2, traj.at(n / 2), prec).c;
      const double ln = std::log(static_cast<double>(n));
      nx.push_back(ln);
      ny.push_back(log(abs(c_n - c_h)).to_double() - depth * std::log(ln));
    }
    const double shrink = fit_slope(nx, ny);
    std::ostringstream os2;
    os2 << "slope " << shrink << ", expected -3";
    report.add(label + ": error-bar shrinkage", std::abs(shrink + 3) <= options.slope_tolerance, os2.str());

    if (map.has_builtin_template) {
      const AsymptoticTemplate builtin = template_for(map, depth, TemplateSource::Builtin);
      const BigFloat cb = solve_constant(builtin, options.n, traj.final_value, prec).c;
      const BigFloat cd = solve_constant(t, options.n, traj.final_value, prec).c;
      const BigFloat diff = abs(cb - cd);
      report.add(label + ": builtin vs derived template",
                 diff < power_of_two(-options.independence_bits, prec),
                 "|C_builtin - C_derived| = " + sci(diff, 3) + ", bound 2^-" +
                     std::to_string(options.independence_bits));
    }
  }
  return report;
}

}  // namespace mapconst
