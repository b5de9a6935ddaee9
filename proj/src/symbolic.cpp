#include "mapconst/symbolic.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

#include "mapconst/errors.hpp"

namespace mapconst {
namespace {

using PolyQ = std::vector<QSqrt2>;

constexpr int kMaxDepth = 6;

int unknown_id(int block, int log_power) { return block * 16 + log_power; }

std::string unknown_name(int id) { return "U[" + std::to_string(id / 16) + "," + std::to_string(id % 16) + "]"; }

void trim(PolyQ& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

PolyQ poly_mul(const PolyQ& a, const PolyQ& b) {
  if (a.empty() || b.empty()) return {};
  PolyQ out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

PolyQ poly_sub(PolyQ a, const PolyQ& b) {
  if (b.size() > a.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

/// p(shift + t) as a polynomial in t.
PolyQ taylor_shift(const PolyQ& p, const QSqrt2& shift) {
  PolyQ out;
  PolyQ power{1};
  const PolyQ linear{shift, 1};
  for (const auto& c : p) {
    PolyQ term = power;
    for (auto& v : term) v *= c;
    if (term.size() > out.size()) out.resize(term.size());
    for (std::size_t i = 0; i < term.size(); ++i) out[i] += term[i];
    power = poly_mul(power, linear);
  }
  trim(out);
  return out;
}

std::optional<std::size_t> lowest(const PolyQ& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p[i].is_zero()) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> highest(const PolyQ& p) {
  for (std::size_t i = p.size(); i-- > 0;) {
    if (!p[i].is_zero()) return i;
  }
  return std::nullopt;
}

/// Real n-th root inside Q(sqrt 2); the positive one for even n.
std::optional<QSqrt2> real_root(const QSqrt2& v, unsigned n) {
  if (n == 1) return v;
  if (v.is_rational()) {
    if (auto r = exact_root(v.rational_part(), n)) return QSqrt2(*r);
  }
  if (n % 2 == 0) {
    auto s = v.sqrt();
    if (!s) return std::nullopt;
    return real_root(*s, n / 2);
  }
  return std::nullopt;
}

struct Balance {
  Rational e0;
  QSqrt2 gamma;  // c^n = gamma
  int n = 0;
};

Balance leading_balance(const PolyQ& d, const PolyQ& q, Direction dir) {
  const bool growth = dir == Direction::Growth;
  const auto i = growth ? highest(d) : lowest(d);
  const auto l = growth ? highest(q) : lowest(q);
  if (!i || !l) throw DerivationError("step has no leading balance");
  const int n = static_cast<int>(*i) - static_cast<int>(*l) - 1;
  if (n == 0) throw DerivationError("leading balance is degenerate");
  Balance b;
  b.n = n;
  b.e0 = ratio(1, n);
  b.gamma = -(QSqrt2(b.e0) * q[*l]) / d[*i];
  return b;
}

std::string leading_text(const QSqrt2& c, const Rational& e0, const QSqrt2& offset) {
  std::string out;
  if (!offset.is_zero()) out = offset.str() + " + ";
  return out + "(" + c.str() + ")*k^(" + to_string(-e0) + ")";
}

void require_constant_coef(const CoefficientPoly& p, const std::string& where) {
  if (!p.is_constant() || p.is_zero()) {
    throw DerivationError("unknown coefficient at " + where + " is not an invertible constant");
  }
}

std::string slot_text(int tick, int grid, int log_power) {
  return "e=" + to_string(ratio(tick, grid)) + " j=" + std::to_string(log_power);
}

}  // namespace

std::string ConsistencyReport::str() const {
  std::ostringstream os;
  os << "leading: " << leading << '\n';
  if (scale) os << "scale: " << scale->str() << '\n';
  for (const auto& s : slots) {
    os << "stage " << s.stage << " e=" << to_string(s.exponent) << " j=" << s.log_power << ": ";
    if (s.status == SlotRecord::Status::Solved) {
      os << "solved " << s.unknown;
    } else {
      os << "identically satisfied";
    }
    os << '\n';
  }
  os << "free constant unconstrained: " << (free_constant_unconstrained ? "true" : "false") << '\n';
  os << "free-constant slot identically zero: " << (free_slot_identically_zero ? "true" : "false") << '\n';
  os << "residual vanishes through e=" << to_string(checked_through) << ": "
     << (residual_vanishes ? "true" : "false") << '\n';
  return os.str();
}

Derivation derive_coefficients(const MapSpec& map, int depth) {
  if (!map.derivable) throw TemplateError("no asymptotic expansion is supported for map '" + map.id + "'");
  if (depth < 2 || depth > kMaxDepth) {
    throw std::invalid_argument("depth must lie in [2, " + std::to_string(kMaxDepth) + "]");
  }
  ExactStep<QSqrt2> step;
  try {
    step = instantiate_exact(map, QSqrt2(0));
  } catch (const std::invalid_argument& e) {
    throw TemplateError(std::string(e.what()) + "; exact derivation needs a in Q(sqrt2)");
  }
  PolyQ p = step.numerator;
  PolyQ q = step.denominator;
  trim(p);
  trim(q);
  const QSqrt2 xs(map.offset);

  auto translated = [&](const PolyQ& num, const PolyQ& den) {
    PolyQ pt = taylor_shift(num, xs);
    PolyQ qt = taylor_shift(den, xs);
    PolyQ dt = poly_sub(pt, poly_mul(PolyQ{xs, 1}, qt));
    return std::make_tuple(pt, qt, dt);
  };
  auto [pt, qt, dt] = translated(p, q);

  Balance bal = leading_balance(dt, qt, map.direction);
  if (bal.e0 != map.leading_exponent) {
    throw DerivationError("leading balance gives e0 = " + to_string(bal.e0) + ", registry says " +
                          to_string(map.leading_exponent));
  }
  const unsigned n_abs = static_cast<unsigned>(std::abs(bal.n));
  QSqrt2 target = bal.n > 0 ? bal.gamma : bal.gamma.inverse();
  std::optional<QSqrt2> c = real_root(target, n_abs);
  std::optional<TemplateScale> scale;
  if (!c) {
    // Conjugate by x = lambda * xi with lambda^n_abs = rho so that the leading coefficient becomes 1.
    if (!target.is_rational() || target.sign() <= 0 || !xs.is_zero()) {
      throw DerivationError("leading coefficient is not in Q(sqrt2) and no rational rescaling exists");
    }
    const Rational rho = target.rational_part();
    const long residue = [&] {
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (!p[i].is_zero()) return static_cast<long>(i % n_abs);
      }
      return 0L;
    }();
    auto scaled = [&](const PolyQ& poly, long offset) {
      PolyQ out(poly.size());
      for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i].is_zero()) continue;
        const long e = static_cast<long>(i) + offset - residue;
        if (e % static_cast<long>(n_abs) != 0) {
          throw DerivationError("map is not conjugate to a rational map under the leading rescaling");
        }
        out[i] = poly[i] * QSqrt2(rho).pow(e / static_cast<long>(n_abs));
      }
      return out;
    };
    p = scaled(p, 0);
    q = scaled(q, 1);
    std::tie(pt, qt, dt) = translated(p, q);
    bal = leading_balance(dt, qt, map.direction);
    target = bal.n > 0 ? bal.gamma : bal.gamma.inverse();
    c = real_root(target, n_abs);
    if (!c) throw DerivationError("rescaled leading coefficient is still outside Q(sqrt2)");
    scale = TemplateScale{ScalarExpr::parse(to_string(rho)), n_abs};
  }

  const int g = 2 * map.grid;
  LogLaurentSeries known(g);
  const int e0_tick = known.tick_of(bal.e0);
  known.add(e0_tick, 0, *c);

  Derivation out;
  out.report.leading = leading_text(*c, bal.e0, xs);
  out.report.scale = scale;
  const CoefficientPoly free_value = CoefficientPoly::symbol() * map.free_prefactor;

  for (int m = 1; m < depth; ++m) {
    const int block_tick = e0_tick + m * g;
    LogLaurentSeries s = known;
    for (int j = 0; j <= m; ++j) s.add(block_tick, j, AffineCoef::unknown(unknown_id(m, j)));
    const auto lq = predicted_lead(qt, s);
    if (!lq) throw DerivationError("denominator vanishes on the ansatz");
    const int slot = block_tick + g + *lq;
    const int ds_lead = e0_tick + g;
    const LogLaurentSeries ds = shift_expand(s, slot - *lq) - s.truncated(slot - *lq);
    const LogLaurentSeries lhs = multiply(ds, polynomial_of(qt, s, slot - ds_lead), slot);
    const LogLaurentSeries residual = lhs - polynomial_of(dt, s, slot);

    for (const auto& [key, coef] : residual.terms()) {
      if (key.first >= slot) break;
      throw DerivationError("residual does not vanish at " + slot_text(key.first, g, key.second) +
                            " (stage " + std::to_string(m) + ")");
    }
    std::map<int, CoefficientPoly> solved;
    int top = m;
    for (const auto& [key, coef] : residual.terms()) {
      if (key.first == slot) top = std::max(top, key.second);
    }
    bool free_seen = false;
    for (int j = top; j >= 0; --j) {
      AffineCoef eq = residual.coefficient(slot, j);
      if (m == 1 && !eq.unknown_coefficient(unknown_id(1, 0)).is_zero()) free_seen = true;
      for (const auto& [id, value] : solved) eq = eq.substitute(id, value);
      const std::string where = slot_text(slot, g, j);
      SlotRecord rec;
      rec.stage = m;
      rec.exponent = ratio(slot, g);
      rec.log_power = j;
      if (eq.unknowns().empty()) {
        if (!eq.constant().is_zero()) {
          throw DerivationError("inconsistent equation at " + where + ": " + eq.constant().str() + " = 0");
        }
        rec.status = SlotRecord::Status::IdenticallySatisfied;
        if (m == 1 && j == top) out.report.free_slot_identically_zero = true;
      } else if (eq.unknowns().size() == 1) {
        const auto& [id, coef] = *eq.unknowns().begin();
        require_constant_coef(coef, where);
        const QSqrt2 inv = coef.coefficient(0).inverse();
        solved[id] = -(eq.constant() * inv);
        rec.status = SlotRecord::Status::Solved;
        rec.unknown = unknown_name(id);
      } else {
        throw DerivationError("system is not triangular at " + where + ": " +
                              std::to_string(eq.unknowns().size()) + " new unknowns");
      }
      out.report.slots.push_back(rec);
    }
    for (int j = 0; j <= m; ++j) {
      const int id = unknown_id(m, j);
      if (solved.count(id) != 0) continue;
      if (m == 1 && j == 0) {
        solved[id] = free_value;
        continue;
      }
      throw DerivationError("unknown " + unknown_name(id) + " is left undetermined");
    }
    if (m == 1) {
      out.report.free_constant_unconstrained = !free_seen;
      if (free_seen) throw DerivationError("the free constant is constrained by the first block");
    }
    for (int j = 0; j <= m; ++j) known.add(block_tick, j, solved.at(unknown_id(m, j)));
  }

  // Independent check: S(k+1) - f(S(k)) through the order fixed by the last block.
  const int check_tick = e0_tick + depth * g;
  const PolyQ f_num = poly_sub(pt, poly_mul(PolyQ{xs}, qt));
  const LogLaurentSeries r = shift_expand(known, check_tick) - apply_rational(f_num, qt, known, check_tick);
  out.report.checked_through = ratio(check_tick, g);
  out.report.residual_vanishes = r.truncated(check_tick).is_zero();

  AsymptoticTemplate& t = out.tmpl;
  t.map_id = map.id;
  t.source = "derived";
  if (map.a) t.parameter = map.a->text();
  t.offset = xs;
  t.grid = map.grid;
  t.depth = depth;
  t.scale = scale;
  // Terms come out ascending in log power; the template wants descending.
  std::map<std::pair<int, int>, CoefficientPoly> ordered;
  for (const auto& [key, coef] : known.terms()) ordered[{key.first, -key.second}] = coef.constant();
  for (const auto& [key, coef] : ordered) {
    if (key.first == e0_tick + g && key.second == 0) t.free_term = t.terms.size();
    t.terms.push_back(TemplateTerm{ratio(key.first, g), -key.second, coef});
  }
  t.validate();
  return out;
}

TemplateComparison compare_templates(const AsymptoticTemplate& expected, const AsymptoticTemplate& actual) {
  TemplateComparison out;
  auto fail = [&](const std::string& line, std::optional<std::pair<Rational, int>> slot) {
    out.match = false;
    out.mismatches.push_back(line);
    if (slot && !out.first_mismatch) out.first_mismatch = slot;
  };
  if (!(expected.offset == actual.offset)) {
    fail("offset: " + expected.offset.str() + " vs " + actual.offset.str(), std::nullopt);
  }
  const std::string es = expected.scale ? expected.scale->str() : "1";
  const std::string as = actual.scale ? actual.scale->str() : "1";
  if (es != as) fail("scale: " + es + " vs " + as, std::nullopt);
  std::map<std::pair<Rational, int>, const TemplateTerm*> lhs;
  std::map<std::pair<Rational, int>, const TemplateTerm*> rhs;
  for (const auto& t : expected.terms) lhs[{t.exponent, t.log_power}] = &t;
  for (const auto& t : actual.terms) rhs[{t.exponent, t.log_power}] = &t;
  std::map<std::pair<Rational, int>, int> keys;
  for (const auto& [k, v] : lhs) keys[k] = 0;
  for (const auto& [k, v] : rhs) keys[k] = 0;
  for (const auto& [key, unused] : keys) {
    const auto* a = lhs.count(key) != 0 ? lhs[key] : nullptr;
    const auto* b = rhs.count(key) != 0 ? rhs[key] : nullptr;
    const std::string where = "e=" + to_string(key.first) + " j=" + std::to_string(key.second);
    const std::string av = a != nullptr ? a->coeff.str() : std::string("absent");
    const std::string bv = b != nullptr ? b->coeff.str() : std::string("absent");
    if (a == nullptr || b == nullptr || !(a->coeff == b->coeff)) fail(where + ": " + av + " vs " + bv, key);
  }
  const auto& fe = expected.terms.at(expected.free_term);
  const auto& fa = actual.terms.at(actual.free_term);
  if (fe.exponent != fa.exponent || fe.log_power != fa.log_power) fail("free-constant term differs", std::nullopt);
  return out;
}

TemplateComparison verify_builtin(const MapSpec& map) {
  return compare_templates(builtin_template(map, 4), derive_coefficients(map, 4).tmpl);
}

LogLaurentSeries shift_expand(const LogLaurentSeries& s, const Rational& e_max) {
  return shift_expand(s, s.tick_of(e_max));
}

LogLaurentSeries apply_map(const MapSpec& map, const LogLaurentSeries& s, const Rational& e_max) {
  if (map.uses_x0) throw std::invalid_argument("map '" + map.id + "' depends on the initial condition");
  const ExactStep<QSqrt2> step = instantiate_exact(map, QSqrt2(0));
  return apply_rational(step.numerator, step.denominator, s, s.tick_of(e_max));
}

}  // namespace mapconst
