#include "mapconst/ratfunc.hpp"

#include <algorithm>
#include <stdexcept>

#include "mapconst/errors.hpp"

namespace mapconst {

Poly::Poly(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

Poly Poly::constant(Rational c) { return Poly({std::move(c)}); }

Poly Poly::variable() { return Poly({0, 1}); }

Rational Poly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::pow(unsigned n) const {
  Poly out = constant(1);
  for (unsigned i = 0; i < n; ++i) out = out * *this;
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
  return Poly(std::move(out));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] -= b.c_[i];
  return Poly(std::move(out));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(out));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DomainError("rational function with zero denominator");
}

RatFunc::RatFunc(Rational c) : RatFunc(Poly::constant(std::move(c)), Poly::constant(1)) {}

RatFunc RatFunc::variable() { return {Poly::variable(), Poly::constant(1)}; }

RatFunc RatFunc::compose(const RatFunc& inner) const {
  // N(n/d)/D(n/d) with both scaled by d^deg.
  const int deg = std::max(num_.degree(), den_.degree());
  auto homogenize = [&](const Poly& p) {
    Poly out;
    for (int i = 0; i <= p.degree(); ++i) {
      const Rational& c = p.coefficients()[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      out = out + Poly::constant(c) * inner.num_.pow(static_cast<unsigned>(i)) *
                      inner.den_.pow(static_cast<unsigned>(deg - i));
    }
    return out;
  };
  return {homogenize(num_), homogenize(den_)};
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
  return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.num_.is_zero()) throw DomainError("division by the zero rational function");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ * b.den_ == b.num_ * a.den_; }

RatFunc step_function(const MapSpec& map, const Rational& x0) {
  const ExactStep<Rational> step = instantiate_exact(map, x0);
  return {Poly(step.numerator), Poly(step.denominator)};
}

}  // namespace mapconst
