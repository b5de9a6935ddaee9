#include "mapconst/map_spec.hpp"

#include <stdexcept>

#include "mapconst/errors.hpp"

namespace mapconst {
namespace {

ScalarExpr expr(const char* text) { return ScalarExpr::parse(text); }

Interval open_interval(const char* lo, const char* hi) {
  Interval d;
  if (lo != nullptr) d.lower = expr(lo);
  if (hi != nullptr) d.upper = expr(hi);
  return d;
}

Interval positive() { return open_interval("0", nullptr); }

MapSpec base(std::string id, std::string formula, std::vector<ParamCoef> num, std::vector<ParamCoef> den,
             Interval domain, Kernel kernel) {
  MapSpec m;
  m.id = std::move(id);
  m.formula = std::move(formula);
  m.numerator = std::move(num);
  m.denominator = std::move(den);
  m.domain = std::move(domain);
  m.kernel = kernel;
  for (const auto& list : {m.numerator, m.denominator}) {
    for (const auto& c : list) {
      m.uses_a = m.uses_a || c.c_a != 0;
      m.uses_x0 = m.uses_x0 || c.c_x0 != 0;
    }
  }
  return m;
}

void set_asymptotics(MapSpec& m, int grid, Rational e0, Direction dir, Rational offset, QSqrt2 prefactor) {
  m.grid = grid;
  m.leading_exponent = std::move(e0);
  m.direction = dir;
  m.offset = std::move(offset);
  m.free_prefactor = std::move(prefactor);
  m.derivable = true;
}

std::optional<MapSpec> lookup(std::string_view id) {
  const Rational half(1, 2);
  const Rational three_halves(3, 2);
  if (id == "m1") {
    auto m = base("m1", "x(1-x)^2", {0, 1, -2, 1}, {1}, open_interval("0", "1"), Kernel::M1);
    set_asymptotics(m, 1, 1, Direction::Decay, 0, -1);
    m.has_builtin_template = true;
    return m;
  }
  if (id == "m2") {
    Interval d = open_interval("0", "1");
    d.lower_closed = true;
    auto m = base("m2", "(2+x^3)/3", {2, 0, 0, 1}, {3}, d, Kernel::M2);
    set_asymptotics(m, 1, 1, Direction::ApproachOne, 1, 1);
    m.has_builtin_template = true;
    return m;
  }
  if (id == "m3") {
    auto m = base("m3", "x(1-x^2)", {0, 1, 0, -1}, {1}, open_interval("0", "1"), Kernel::M3);
    set_asymptotics(m, 2, half, Direction::Decay, 0, QSqrt2(0, Rational(-1, 4)));
    m.has_builtin_template = true;
    return m;
  }
  if (id == "m4") {
    auto m = base("m4", "x+a/x", {ParamCoef::param_a(), 0, 1}, {0, 1}, positive(), Kernel::M4);
    set_asymptotics(m, 2, -half, Direction::Growth, 0, 1);
    m.has_builtin_template = true;
    return m;
  }
  if (id == "m5") {
    auto m = base("m5", "z+1/z^2", {1, 0, 0, 1}, {0, 0, 1}, positive(), Kernel::M5);
    set_asymptotics(m, 3, Rational(-1, 3), Direction::Growth, 0, 1);
    return m;
  }
  if (id == "sq") return base("sq", "x^2", {0, 0, 1}, {1}, Interval{}, Kernel::Square);
  if (id == "rcf") return base("rcf", "x/(1+x0*x)", {0, 1}, {1, ParamCoef::param_x0()}, positive(), Kernel::Rcf);
  if (id == "cf") return base("cf", "x0+1/x", {1, ParamCoef::param_x0()}, {0, 1}, positive(), Kernel::Cf);
  if (id == "bcf") {
    return base("bcf", "y0+(y0+1/y)/y", {1, ParamCoef::param_x0(), ParamCoef::param_x0()}, {0, 0, 1}, positive(),
                Kernel::Bcf);
  }
  if (id == "ns2") return base("ns2", "x/2+1/x", {2, 0, 1}, {0, 2}, positive(), Kernel::Ns2);
  if (id == "ns3") return base("ns3", "y/2+(3/2)/y", {3, 0, 1}, {0, 2}, positive(), Kernel::Ns3);
  if (id == "dn2") {
    return base("dn2", "x(3/2-x^2)", {0, three_halves, 0, -1}, {1}, open_interval("0", "sqrt(3/2)"), Kernel::Dn2);
  }
  if (id == "dn3") {
    return base("dn3", "(3/2)y(1-y^2)", {0, three_halves, 0, Rational(-three_halves)}, {1}, open_interval("0", "1"),
                Kernel::Dn3);
  }
  if (id == "ak") return base("ak", "a+1+1/(a-1)", {0, 0, 1}, {-1, 1}, positive(), Kernel::Ak);
  if (id == "bk") return base("bk", "1+b+1/b", {1, 1, 1}, {0, 1}, positive(), Kernel::Bk);
  if (id == "logistic") {
    return base("logistic", "x(1-x)", {0, 1, -1}, {1}, open_interval("0", "1"), Kernel::Logistic);
  }
  return std::nullopt;
}

template <class F>
F evaluate_coef(const ParamCoef& p, const std::optional<F>& a, const F& x0) {
  F out(p.c);
  if (p.c_a != 0) {
    if (!a) throw std::invalid_argument("map parameter a is not exact in this field");
    out += F(p.c_a) * *a;
  }
  if (p.c_x0 != 0) out += F(p.c_x0) * x0;
  return out;
}

template <class F>
std::optional<F> exact_a(const MapSpec& map);

template <>
std::optional<Rational> exact_a<Rational>(const MapSpec& map) {
  return map.rational_a();
}

template <>
std::optional<QSqrt2> exact_a<QSqrt2>(const MapSpec& map) {
  return map.qsqrt2_a();
}

template <class F>
F horner(const std::vector<F>& coeffs, const F& x) {
  F acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

int compare_to_bound(const BigFloat& x, const ScalarExpr& bound) {
  const BigFloat b = bound.evaluate(4 * x.precision());
  const auto c = x <=> b;
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int compare_to_bound(const QSqrt2& x, const ScalarExpr& bound) {
  if (auto exact = bound.exact_qsqrt2()) return (x - *exact).sign();
  const BigFloat b = bound.evaluate(512);
  const auto c = x.to_bigfloat(512) <=> b;
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

template <class X>
bool in_domain_impl(const Interval& d, const X& x) {
  if (d.lower) {
    const int c = compare_to_bound(x, *d.lower);
    if (c < 0 || (c == 0 && !d.lower_closed)) return false;
  }
  if (d.upper) {
    const int c = compare_to_bound(x, *d.upper);
    if (c > 0 || (c == 0 && !d.upper_closed)) return false;
  }
  return true;
}

}  // namespace

std::string to_string(Direction d) {
  switch (d) {
    case Direction::Decay:
      return "decay";
    case Direction::ApproachOne:
      return "approach-1";
    case Direction::Growth:
      return "growth";
    case Direction::None:
      return "none";
  }
  return "none";
}

std::string Interval::str() const {
  std::string out = lower ? (lower_closed ? "[" : "(") + lower->text() : "(-inf";
  out += ", ";
  out += upper ? upper->text() + (upper_closed ? "]" : ")") : "inf)";
  return out;
}

std::optional<Rational> MapSpec::rational_a() const {
  if (!a) return std::nullopt;
  return a->exact_rational();
}

std::optional<QSqrt2> MapSpec::qsqrt2_a() const {
  if (!a) return std::nullopt;
  return a->exact_qsqrt2();
}

const std::vector<std::string>& registry_ids() {
  static const std::vector<std::string> ids = {"m1",  "m2",  "m3",  "m4",  "m5",  "sq", "rcf", "cf",
                                               "bcf", "ns2", "ns3", "dn2", "dn3", "ak", "bk",  "logistic"};
  return ids;
}

MapSpec make_map(std::string_view id, std::optional<ScalarExpr> a) {
  auto found = lookup(id);
  if (!found) throw std::invalid_argument("unknown map '" + std::string(id) + "'");
  MapSpec m = std::move(*found);
  if (!m.uses_a) {
    if (a) throw std::invalid_argument("map '" + m.id + "' takes no parameter a");
    return m;
  }
  if (!a) a = ScalarExpr::from_integer(1);
  if (a->evaluate(kDefaultPrecision).sign() <= 0) throw DomainError("parameter a must be positive, got " + a->text());
  m.a = std::move(a);
  return m;
}

MapSpec make_auxiliary_map(std::string_view id) {
  if (id == "gw2") {
    Interval d = open_interval("0", "1");
    d.lower_closed = true;
    return base("gw2", "1/2+xi^2/2", {1, 0, 1}, {2}, d, Kernel::Generic);
  }
  if (id == "m2y") {
    Interval d = open_interval("0", "1/3");
    d.upper_closed = true;
    auto m = base("m2y", "y-3y^2+3y^3", {0, 1, -3, 3}, {1}, d, Kernel::Generic);
    set_asymptotics(m, 1, 1, Direction::Decay, 0, Rational(-1, 3));
    return m;
  }
  throw std::invalid_argument("unknown auxiliary map '" + std::string(id) + "'");
}

template <class F>
F ExactStep<F>::numerator_at(const F& x) const {
  return horner(numerator, x);
}

template <class F>
F ExactStep<F>::denominator_at(const F& x) const {
  return horner(denominator, x);
}

template <class F>
ExactStep<F> instantiate_exact(const MapSpec& map, const F& x0) {
  const std::optional<F> a = map.uses_a ? exact_a<F>(map) : std::optional<F>{};
  if (map.uses_a && !a) throw std::invalid_argument("parameter a = " + map.a->text() + " is not exact in this field");
  ExactStep<F> out;
  for (const auto& c : map.numerator) out.numerator.push_back(evaluate_coef(c, a, x0));
  for (const auto& c : map.denominator) out.denominator.push_back(evaluate_coef(c, a, x0));
  return out;
}

template struct ExactStep<Rational>;
template struct ExactStep<QSqrt2>;
template ExactStep<Rational> instantiate_exact(const MapSpec&, const Rational&);
template ExactStep<QSqrt2> instantiate_exact(const MapSpec&, const QSqrt2&);

NumericStep instantiate_numeric(const MapSpec& map, const BigFloat& x0, Precision prec) {
  const Precision work = prec + kGuardBits;
  std::optional<BigFloat> a;
  if (map.uses_a) a = map.a->evaluate(work);
  auto coef = [&](const ParamCoef& p) {
    BigFloat out(p.c, work);
    if (p.c_a != 0) out += BigFloat(p.c_a, work) * *a;
    if (p.c_x0 != 0) out += BigFloat(p.c_x0, work) * x0.rounded(work);
    return out.rounded(prec);
  };
  NumericStep out;
  for (const auto& c : map.numerator) out.numerator.push_back(coef(c));
  for (const auto& c : map.denominator) out.denominator.push_back(coef(c));
  return out;
}

bool in_domain(const Interval& domain, const BigFloat& x) {
  if (!x.is_finite()) return false;
  return in_domain_impl(domain, x);
}

bool in_domain(const Interval& domain, const QSqrt2& x) { return in_domain_impl(domain, x); }

}  // namespace mapconst
