#include "mapconst/series.hpp"

#include <json.hpp>
#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mapconst/errors.hpp"

namespace mapconst {
namespace {

CoefficientPoly poly(std::initializer_list<QSqrt2> c) { return CoefficientPoly(std::vector<QSqrt2>(c)); }

QSqrt2 q(long num, long den = 1) { return QSqrt2(ratio(num, den)); }

const QSqrt2 kSqrt2 = QSqrt2::sqrt2();
const QSqrt2 kInvSqrt2 = QSqrt2(0, Rational(1, 2));

CoefficientPoly over_sqrt2(const CoefficientPoly& p) { return p * kInvSqrt2; }

void push(AsymptoticTemplate& t, Rational e, int j, CoefficientPoly c) {
  t.terms.push_back(TemplateTerm{std::move(e), j, std::move(c)});
}

AsymptoticTemplate builtin_m1() {
  AsymptoticTemplate t;
  t.map_id = "m1";
  t.grid = 1;
  push(t, 1, 0, q(1, 2));
  push(t, 2, 1, q(-3, 8));
  push(t, 2, 0, poly({0, -1}));
  push(t, 3, 2, q(9, 32));
  push(t, 3, 1, poly({q(-9, 32), q(3, 2)}));
  push(t, 3, 0, poly({q(5, 32), q(-3, 4), 2}));
  push(t, 4, 3, q(-27, 128));
  push(t, 4, 2, -poly({q(-135, 256), q(27, 16)}));
  push(t, 4, 1, -poly({q(9, 16), q(-45, 16), q(9, 2)}));
  push(t, 4, 0, -poly({q(-51, 256), q(3, 2), q(-15, 4), 4}));
  t.free_term = 2;
  return t;
}

AsymptoticTemplate builtin_m2() {
  AsymptoticTemplate t;
  t.map_id = "m2";
  t.grid = 1;
  t.offset = 1;
  push(t, 1, 0, -1);
  push(t, 2, 1, q(2, 3));
  push(t, 2, 0, poly({0, 1}));
  push(t, 3, 2, q(-4, 9));
  push(t, 3, 1, -poly({q(-4, 9), q(4, 3)}));
  push(t, 3, 0, -poly({q(2, 9), q(-2, 3), 1}));
  push(t, 4, 3, q(1, 3));
  push(t, 4, 2, poly({q(-37, 54), q(4, 3)}));
  push(t, 4, 1, poly({q(43, 54), q(-20, 9), 2}));
  push(t, 4, 0, poly({q(-23, 108), q(10, 9), q(-5, 3), 1}));
  t.free_term = 2;
  return t;
}

AsymptoticTemplate builtin_m3() {
  AsymptoticTemplate t;
  t.map_id = "m3";
  t.grid = 2;
  const Rational h(1, 2);
  push(t, h, 0, kInvSqrt2);
  push(t, 3 * h, 1, q(-3, 8) * kInvSqrt2);
  push(t, 3 * h, 0, poly({0, q(-1, 2) * kInvSqrt2}));
  push(t, 5 * h, 2, q(27, 128) * kInvSqrt2);
  push(t, 5 * h, 1, over_sqrt2(poly({q(-9, 32), q(9, 16)})));
  push(t, 5 * h, 0, over_sqrt2(poly({q(5, 32), q(-3, 8), q(3, 8)})));
  push(t, 7 * h, 3, q(-135, 1024) * kInvSqrt2);
  push(t, 7 * h, 2, -over_sqrt2(poly({q(-27, 64), q(135, 256)})));
  push(t, 7 * h, 1, -over_sqrt2(poly({q(129, 256), q(-9, 8), q(45, 64)})));
  push(t, 7 * h, 0, -over_sqrt2(poly({q(-51, 256), q(43, 64), q(-3, 4), q(5, 16)})));
  t.free_term = 2;
  return t;
}

AsymptoticTemplate builtin_m4(const MapSpec& map) {
  const auto a = map.qsqrt2_a();
  std::optional<QSqrt2> s = a ? a->sqrt() : std::nullopt;
  if (!s) throw TemplateError("m4 builtin template needs sqrt(a) in Q(sqrt2); a = " + map.a->text());
  const QSqrt2 r = *s * kSqrt2;  // sqrt(2a)
  AsymptoticTemplate t;
  t.map_id = "m4";
  t.parameter = map.a->text();
  t.grid = 2;
  const Rational h(1, 2);
  push(t, -h, 0, r);
  push(t, h, 1, *s * kInvSqrt2 / q(4));
  push(t, h, 0, poly({0, 1}));
  push(t, 3 * h, 2, -(*s * kInvSqrt2 / q(64)));
  push(t, 3 * h, 1, poly({r / q(32), q(-1, 8)}));
  push(t, 3 * h, 0, poly({-r / q(32), q(1, 4), -kSqrt2 / q(4)}));
  push(t, 5 * h, 3, *s * kInvSqrt2 / q(512));
  push(t, 5 * h, 2, poly({-r / q(128), q(3, 128)}));
  const QSqrt2 d1 = q(256) * *s;
  push(t, 5 * h, 1, poly({q(5) * kSqrt2 * *a / d1, q(-32) * *s / d1, q(4) * kSqrt2 * (*s + q(5)) / d1}));
  const QSqrt2 d0 = q(768) * *a;
  push(t, 5 * h, 0,
       poly({q(-11) * kSqrt2 * *a * *s / d0, q(120) * *a / d0, q(-2) * r * (q(87) * *s + q(9)) / d0,
             q(96) * (*s + q(1)) / d0}));
  t.free_term = 2;
  return t;
}

std::string coeff_list(const CoefficientPoly& p) {
  std::string out;
  const int deg = std::max(p.degree(), 0);
  for (int i = 0; i <= deg; ++i) {
    if (i > 0) out += " ; ";
    out += p.coefficient(i).str();
  }
  return out;
}

}  // namespace

std::string TemplateScale::str() const {
  const bool simple = radicand.exact_rational() && radicand.text().find_first_of("+-*/^ ") == std::string::npos;
  return (simple ? radicand.text() : "(" + radicand.text() + ")") + "^(1/" + std::to_string(root) + ")";
}

const TemplateTerm* AsymptoticTemplate::find(const Rational& exponent, int log_power) const {
  for (const auto& term : terms) {
    if (term.exponent == exponent && term.log_power == log_power) return &term;
  }
  return nullptr;
}

int AsymptoticTemplate::block_of(const Rational& exponent) const {
  const Rational d = exponent - leading().exponent;
  if (d.get_den() != 1) throw TemplateError("exponent " + to_string(exponent) + " is not in a block");
  return static_cast<int>(d.get_num().get_si());
}

void AsymptoticTemplate::validate() const {
  if (terms.empty()) throw TemplateError("template has no terms");
  if (grid <= 0) throw TemplateError("template grid must be positive");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (Rational(t.exponent * grid).get_den() != 1) {
      throw TemplateError("exponent " + to_string(t.exponent) + " is off the grid 1/" + std::to_string(grid));
    }
    if (i > 0) {
      const auto& p = terms[i - 1];
      const bool ordered = p.exponent < t.exponent || (p.exponent == t.exponent && p.log_power > t.log_power);
      if (!ordered) throw TemplateError("terms are not sorted by exponent then descending log power");
    }
    const int block = block_of(t.exponent);
    if (block < 0 || block >= depth) throw TemplateError("exponent " + to_string(t.exponent) + " outside the blocks");
    if (t.log_power < 0 || t.log_power > block) {
      throw TemplateError("log power " + std::to_string(t.log_power) + " exceeds block index " +
                          std::to_string(block));
    }
  }
  if (free_term >= terms.size()) throw TemplateError("free-constant term index out of range");
  const auto& f = terms[free_term];
  if (f.log_power != 0 || f.coeff.degree() != 1 || !f.coeff.coefficient(0).is_zero()) {
    throw TemplateError("free-constant term must be a pure multiple of C");
  }
}

AsymptoticTemplate AsymptoticTemplate::truncated(int blocks) const {
  AsymptoticTemplate out = *this;
  out.depth = std::min(depth, blocks);
  out.terms.clear();
  for (const auto& t : terms) {
    if (block_of(t.exponent) < blocks) out.terms.push_back(t);
  }
  return out;
}

AsymptoticTemplate AsymptoticTemplate::affine_image(const QSqrt2& alpha, const QSqrt2& beta) const {
  AsymptoticTemplate out = *this;
  out.offset = alpha + beta * offset;
  for (auto& t : out.terms) t.coeff *= beta;
  return out;
}

std::string AsymptoticTemplate::canonical_text() const {
  std::ostringstream os;
  os << "map: " << map_id << '\n';
  if (parameter) os << "a: " << *parameter << '\n';
  os << "offset: " << offset.str() << '\n';
  os << "scale: " << (scale ? scale->str() : std::string("1")) << '\n';
  os << "depth: " << depth << '\n';
  const auto& f = terms.at(free_term);
  os << "free: e=" << to_string(f.exponent) << " j=" << f.log_power << '\n';
  for (const auto& t : terms) {
    os << "e=" << to_string(t.exponent) << " j=" << t.log_power << " : " << coeff_list(t.coeff) << '\n';
  }
  return os.str();
}

std::string AsymptoticTemplate::coefficient_name(std::size_t term_index) const {
  const auto& t = terms.at(term_index);
  const int block = block_of(t.exponent);
  if (block == 2 && t.log_power <= 2) return std::string(1, "wvu"[t.log_power]);
  if (block == 3 && t.log_power <= 3) return std::string(1, "srqp"[t.log_power]);
  return {};
}

AsymptoticTemplate builtin_template(const MapSpec& map, int depth) {
  if (depth < 2) throw std::invalid_argument("depth must be at least 2");
  if (depth > 4) throw TemplateError("builtin templates have depth 4");
  AsymptoticTemplate t;
  if (map.id == "m1") {
    t = builtin_m1();
  } else if (map.id == "m2") {
    t = builtin_m2();
  } else if (map.id == "m3") {
    t = builtin_m3();
  } else if (map.id == "m4") {
    t = builtin_m4(map);
  } else {
    throw TemplateError("no builtin template for map '" + map.id + "'");
  }
  t.source = "builtin";
  t.depth = 4;
  t.validate();
  return t.truncated(depth);
}

BigFloat CollapsedTemplate::value(const BigFloat& c) const {
  const Precision work = precision + kGuardBits;
  BigFloat acc(work);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc *= c;
    acc += *it;
  }
  return acc.rounded(precision);
}

BigFloat CollapsedTemplate::derivative(const BigFloat& c) const {
  const Precision work = precision + kGuardBits;
  BigFloat acc(work);
  for (std::size_t i = coeffs.size(); i-- > 1;) {
    acc *= c;
    acc += coeffs[i] * static_cast<long>(i);
  }
  return acc.rounded(precision);
}

CollapsedTemplate collapse(const AsymptoticTemplate& t, std::uint64_t k, Precision prec) {
  if (k < 2) throw DomainError("template evaluation needs k >= 2, got k=" + std::to_string(k));
  const Precision work = prec + kGuardBits;
  BigFloat kk(work);
  mpfr_set_ui(kk.raw(), k, MPFR_RNDN);
  const BigFloat ln_k = log(kk);
  const BigFloat base = t.grid == 1 ? kk : root(kk, static_cast<unsigned long>(t.grid));
  std::size_t degree = 1;
  for (const auto& term : t.terms) degree = std::max<std::size_t>(degree, term.coeff.degree() + 1);
  std::vector<BigFloat> g(degree, BigFloat(work));
  g[0] = t.offset.to_bigfloat(work);
  for (const auto& term : t.terms) {
    const long tick = Rational(term.exponent * t.grid).get_num().get_si();
    BigFloat factor = pow(base, -tick);
    if (term.log_power > 0) factor *= pow(ln_k, term.log_power);
    for (int i = 0; i <= term.coeff.degree(); ++i) {
      const QSqrt2 c = term.coeff.coefficient(i);
      if (c.is_zero()) continue;
      g[static_cast<std::size_t>(i)] += c.to_bigfloat(work) * factor;
    }
  }
  if (t.scale) {
    // lambda * sum g_i (C/lambda)^i = sum g_i lambda^(1-i) C^i.
    const BigFloat lambda = root(t.scale->radicand.evaluate(work), t.scale->root);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= pow(lambda, 1 - static_cast<long>(i));
  }
  CollapsedTemplate out;
  out.precision = prec;
  for (auto& v : g) out.coeffs.push_back(v.rounded(work));
  return out;
}

BigFloat eval_template(const AsymptoticTemplate& t, const BigFloat& c, std::uint64_t k, Precision prec) {
  if (!c.is_finite()) throw DomainError("template evaluation needs a finite C");
  return collapse(t, k, prec).value(c.rounded(prec + kGuardBits));
}

std::vector<BigFloat> residual(const MapSpec& map, const ScalarExpr& x0,
                               const std::function<BigFloat(std::uint64_t, Precision)>& model,
                               const std::vector<std::uint64_t>& ks, Precision prec, const EngineLimits& limits) {
  if (ks.empty()) return {};
  if (!std::is_sorted(ks.begin(), ks.end())) throw std::invalid_argument("residual: ks must be sorted ascending");
  const Trajectory traj = iterate(map, x0, ks.back(), prec, ks, limits);
  std::vector<BigFloat> out;
  out.reserve(ks.size());
  for (std::uint64_t k : ks) out.push_back(abs(traj.at(k) - model(k, prec)).rounded(prec));
  return out;
}

std::vector<BigFloat> residual(const MapSpec& map, const ScalarExpr& x0, const AsymptoticTemplate& t,
                               const BigFloat& c, const std::vector<std::uint64_t>& ks, Precision prec,
                               const EngineLimits& limits) {
  return residual(
      map, x0, [&](std::uint64_t k, Precision p) { return eval_template(t, c, k, p + kGuardBits); }, ks, prec, limits);
}

std::string template_to_json(const AsymptoticTemplate& t, int indent) {
  nlohmann::ordered_json doc;
  doc["map"] = t.map_id;
  doc["source"] = t.source;
  doc["parameter"] = t.parameter ? nlohmann::ordered_json(*t.parameter) : nlohmann::ordered_json(nullptr);
  doc["offset"] = t.offset.str();
  if (t.scale) {
    doc["scale"] = {{"radicand", t.scale->radicand.text()}, {"root", t.scale->root}};
  } else {
    doc["scale"] = nullptr;
  }
  doc["grid"] = t.grid;
  doc["depth"] = t.depth;
  const auto& f = t.terms.at(t.free_term);
  doc["free_term"] = {{"exponent", to_string(f.exponent)}, {"log_power", f.log_power}};
  auto terms = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < t.terms.size(); ++i) {
    const auto& term = t.terms[i];
    nlohmann::ordered_json entry;
    entry["exponent"] = to_string(term.exponent);
    entry["log_power"] = term.log_power;
    entry["name"] = t.coefficient_name(i);
    auto coeffs = nlohmann::ordered_json::array();
    for (int d = 0; d <= std::max(term.coeff.degree(), 0); ++d) coeffs.push_back(term.coeff.coefficient(d).str());
    entry["coefficients"] = coeffs;
    entry["polynomial"] = term.coeff.str();
    terms.push_back(entry);
  }
  doc["terms"] = terms;
  return doc.dump(indent);
}

}  // namespace mapconst
