#include "mapconst/log_laurent.hpp"

#include <algorithm>
#include <stdexcept>

#include "mapconst/errors.hpp"

namespace mapconst {

AffineCoef::AffineCoef(CoefficientPoly constant) : constant_(std::move(constant)) {}

AffineCoef AffineCoef::unknown(int id, CoefficientPoly scale) {
  AffineCoef out;
  if (!scale.is_zero()) out.unknowns_.emplace(id, std::move(scale));
  return out;
}

CoefficientPoly AffineCoef::unknown_coefficient(int id) const {
  auto it = unknowns_.find(id);
  return it == unknowns_.end() ? CoefficientPoly{} : it->second;
}

AffineCoef AffineCoef::substitute(int id, const CoefficientPoly& value) const {
  auto it = unknowns_.find(id);
  if (it == unknowns_.end()) return *this;
  AffineCoef out = *this;
  out.constant_ += it->second * value;
  out.unknowns_.erase(id);
  return out;
}

AffineCoef& AffineCoef::operator+=(const AffineCoef& o) {
  constant_ += o.constant_;
  for (const auto& [id, c] : o.unknowns_) unknowns_[id] += c;
  prune();
  return *this;
}

AffineCoef& AffineCoef::operator-=(const AffineCoef& o) {
  constant_ -= o.constant_;
  for (const auto& [id, c] : o.unknowns_) unknowns_[id] -= c;
  prune();
  return *this;
}

AffineCoef& AffineCoef::operator*=(const CoefficientPoly& s) {
  constant_ *= s;
  for (auto& [id, c] : unknowns_) c *= s;
  prune();
  return *this;
}

AffineCoef operator*(const AffineCoef& a, const AffineCoef& b) {
  if (a.has_unknowns() && b.has_unknowns()) {
    throw DerivationError("product of two unknown-bearing coefficients inside the truncation order");
  }
  if (b.has_unknowns()) return b * a;
  AffineCoef out = a * b.constant_;
  return out;
}

void AffineCoef::prune() {
  for (auto it = unknowns_.begin(); it != unknowns_.end();) {
    it = it->second.is_zero() ? unknowns_.erase(it) : std::next(it);
  }
}

LogLaurentSeries::LogLaurentSeries(int grid) : grid_(grid) {
  if (grid <= 0) throw std::invalid_argument("series grid must be positive");
}

LogLaurentSeries LogLaurentSeries::monomial(int grid, int tick, int log_power, AffineCoef coeff) {
  LogLaurentSeries s(grid);
  s.add(tick, log_power, coeff);
  return s;
}

AffineCoef LogLaurentSeries::coefficient(int tick, int log_power) const {
  auto it = terms_.find({tick, log_power});
  return it == terms_.end() ? AffineCoef{} : it->second;
}

std::optional<int> LogLaurentSeries::lead_tick() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first.first;
}

int LogLaurentSeries::max_log_power() const {
  int out = 0;
  for (const auto& [key, c] : terms_) out = std::max(out, key.second);
  return out;
}

bool LogLaurentSeries::has_unknowns() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.has_unknowns(); });
}

void LogLaurentSeries::add(int tick, int log_power, const AffineCoef& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(Key{tick, log_power}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

LogLaurentSeries LogLaurentSeries::truncated(int max_tick) const {
  LogLaurentSeries out(grid_);
  for (const auto& [key, c] : terms_) {
    if (key.first > max_tick) break;
    out.terms_.emplace(key, c);
  }
  return out;
}

LogLaurentSeries LogLaurentSeries::shifted(int ticks) const {
  LogLaurentSeries out(grid_);
  for (const auto& [key, c] : terms_) out.terms_.emplace(Key{key.first + ticks, key.second}, c);
  return out;
}

LogLaurentSeries LogLaurentSeries::substitute(int id, const CoefficientPoly& value) const {
  LogLaurentSeries out(grid_);
  for (const auto& [key, c] : terms_) out.add(key.first, key.second, c.substitute(id, value));
  return out;
}

int LogLaurentSeries::tick_of(const Rational& exponent) const {
  Rational t = exponent * grid_;
  if (t.get_den() != 1) throw std::invalid_argument("exponent " + to_string(exponent) + " is off the series grid");
  return static_cast<int>(t.get_num().get_si());
}

LogLaurentSeries& LogLaurentSeries::operator+=(const LogLaurentSeries& o) {
  if (o.grid_ != grid_) throw std::invalid_argument("series grids differ");
  for (const auto& [key, c] : o.terms_) add(key.first, key.second, c);
  return *this;
}

LogLaurentSeries& LogLaurentSeries::operator-=(const LogLaurentSeries& o) {
  if (o.grid_ != grid_) throw std::invalid_argument("series grids differ");
  for (const auto& [key, c] : o.terms_) add(key.first, key.second, AffineCoef{} - c);
  return *this;
}

LogLaurentSeries& LogLaurentSeries::operator*=(const CoefficientPoly& s) {
  LogLaurentSeries out(grid_);
  for (const auto& [key, c] : terms_) out.add(key.first, key.second, c * s);
  *this = std::move(out);
  return *this;
}

std::string LogLaurentSeries::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [key, c] : terms_) {
    if (!out.empty()) out += " + ";
    std::string coeff = "(" + c.constant().str();
    for (const auto& [id, u] : c.unknowns()) coeff += " + (" + u.str() + ")*U" + std::to_string(id);
    coeff += ")";
    out += coeff;
    if (key.second > 0) out += "*L^" + std::to_string(key.second);
    out += "*k^(" + to_string(ratio(-key.first, grid_)) + ")";
  }
  return out;
}

LogLaurentSeries multiply(const LogLaurentSeries& a, const LogLaurentSeries& b, int max_tick) {
  if (a.grid() != b.grid()) throw std::invalid_argument("series grids differ");
  LogLaurentSeries out(a.grid());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      const int tick = ka.first + kb.first;
      if (tick > max_tick) break;
      out.add(tick, ka.second + kb.second, ca * cb);
    }
  }
  return out;
}

LogLaurentSeries power(const LogLaurentSeries& s, unsigned n, int max_tick) {
  if (n == 0) {
    LogLaurentSeries one(s.grid());
    if (max_tick >= 0) one.add(0, 0, 1);
    return one;
  }
  if (n == 1) return s.truncated(max_tick);
  const auto lead = s.lead_tick();
  if (!lead) return LogLaurentSeries(s.grid());
  return multiply(power(s, n - 1, max_tick - *lead), s, max_tick);
}

LogLaurentSeries polynomial_of(const std::vector<QSqrt2>& coeffs, const LogLaurentSeries& s, int max_tick) {
  LogLaurentSeries out(s.grid());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    out += power(s, static_cast<unsigned>(i), max_tick) * CoefficientPoly(coeffs[i]);
  }
  return out;
}

std::optional<int> predicted_lead(const std::vector<QSqrt2>& coeffs, const LogLaurentSeries& s) {
  const auto lead = s.lead_tick();
  std::optional<std::size_t> lowest;
  std::optional<std::size_t> highest;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    if (!lowest) lowest = i;
    highest = i;
  }
  if (!lowest) return std::nullopt;
  if (!lead) return *lowest == 0 ? std::optional<int>(0) : std::nullopt;
  if (*lead > 0) return static_cast<int>(*lowest) * *lead;
  if (*lead < 0) return static_cast<int>(*highest) * *lead;
  // A constant leading term may cancel; look a few grid units ahead.
  const int horizon = 8 * s.grid() * static_cast<int>(coeffs.size());
  return polynomial_of(coeffs, s, horizon).lead_tick();
}

LogLaurentSeries reciprocal(const LogLaurentSeries& s, int max_tick) {
  const auto lead = s.lead_tick();
  if (!lead) throw DerivationError("reciprocal of the zero series");
  const AffineCoef c = s.coefficient(*lead, 0);
  for (const auto& [key, coef] : s.terms()) {
    if (key.first != *lead) break;
    if (key.second != 0) throw DerivationError("reciprocal: leading term carries a logarithm");
  }
  if (c.has_unknowns() || !c.constant().is_constant() || c.constant().is_zero()) {
    throw DerivationError("reciprocal: leading coefficient is not an invertible constant");
  }
  const QSqrt2 inv = c.constant().coefficient(0).inverse();
  const int budget = max_tick + *lead;
  LogLaurentSeries minus_t = s.truncated(budget + *lead).shifted(-*lead) * CoefficientPoly(-inv);
  minus_t.add(0, 0, 1);  // -T = 1 - s/(c k^-lead)
  LogLaurentSeries sum(s.grid());
  LogLaurentSeries term(s.grid());
  if (budget >= 0) term.add(0, 0, 1);
  while (!term.is_zero()) {
    sum += term;
    term = multiply(term, minus_t, budget);
  }
  return sum.shifted(-*lead) * CoefficientPoly(inv);
}

LogLaurentSeries shift_expand(const LogLaurentSeries& s, int max_tick) {
  const int g = s.grid();
  LogLaurentSeries out(g);
  const auto lead = s.lead_tick();
  if (!lead) return out;
  const int budget = max_tick - *lead;
  if (budget < 0) return out;
  // ln(1 + 1/k) = sum_{m>=1} (-1)^(m+1) / (m k^m).
  LogLaurentSeries ell(g);
  for (int m = 1; m * g <= budget; ++m) ell.add(m * g, 0, QSqrt2(Rational((m % 2 == 1) ? 1 : -1, m)));
  std::vector<LogLaurentSeries> ell_pow{power(ell, 0, budget)};
  const int max_j = s.max_log_power();
  for (int i = 1; i <= max_j; ++i) ell_pow.push_back(multiply(ell_pow.back(), ell, budget));

  for (const auto& [key, c] : s.terms()) {
    const auto [tick, j] = key;
    const int room = max_tick - tick;
    if (room < 0) break;
    // (1 + 1/k)^(-e) = sum_m binom(-e, m) k^(-m).
    const Rational minus_e = ratio(-tick, g);
    LogLaurentSeries binom_series(g);
    for (int m = 0; m * g <= room; ++m) {
      binom_series.add(m * g, 0, QSqrt2(binomial(minus_e, static_cast<unsigned>(m))));
    }
    for (int i = 0; i <= j; ++i) {
      const LogLaurentSeries part = multiply(binom_series, ell_pow[static_cast<std::size_t>(i)], room);
      const QSqrt2 choose(binomial(Rational(j), static_cast<unsigned>(i)));
      for (const auto& [pk, pc] : part.terms()) {
        out.add(tick + pk.first, j - i + pk.second, c * (pc.constant() * choose));
      }
    }
  }
  return out;
}

LogLaurentSeries apply_rational(const std::vector<QSqrt2>& numerator, const std::vector<QSqrt2>& denominator,
                                const LogLaurentSeries& s, int max_tick) {
  const auto lq = predicted_lead(denominator, s);
  if (!lq) throw DerivationError("denominator vanishes identically on the series");
  const auto lp = predicted_lead(numerator, s);
  if (!lp) return LogLaurentSeries(s.grid());
  const LogLaurentSeries p = polynomial_of(numerator, s, max_tick + *lq);
  const LogLaurentSeries q = polynomial_of(denominator, s, max_tick - *lp + 2 * *lq);
  return multiply(p, reciprocal(q, max_tick - *lp), max_tick);
}

}  // namespace mapconst
