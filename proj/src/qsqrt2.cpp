#include "mapconst/qsqrt2.hpp"

#include <algorithm>

#include "mapconst/errors.hpp"

namespace mapconst {

int QSqrt2::sign() const {
  const int sp = sgn(p_);
  const int sq = sgn(q_);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // Opposite signs: compare p^2 with 2 q^2.
  return p_ * p_ > 2 * q_ * q_ ? sp : sq;
}

QSqrt2 QSqrt2::inverse() const {
  const Rational n = norm();
  if (n == 0) throw DomainError("division by zero in Q(sqrt2)");
  return {p_ / n, -q_ / n};
}

QSqrt2 QSqrt2::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  QSqrt2 out = 1;
  QSqrt2 base = *this;
  while (n > 0) {
    if (n & 1) out *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return out;
}

std::optional<QSqrt2> QSqrt2::sqrt() const {
  if (sign() < 0) return std::nullopt;
  if (is_zero()) return QSqrt2{};
  if (q_ == 0) {
    if (auto r = exact_root(p_, 2)) return QSqrt2{*r};
    if (auto r = exact_root(p_ / 2, 2)) return QSqrt2{0, *r};
    return std::nullopt;
  }
  // (x + y sqrt2)^2 = p + q sqrt2  <=>  x^2 + 2y^2 = p, 2xy = q.
  auto d = exact_root(norm(), 2);
  if (!d) return std::nullopt;
  for (const Rational& x2 : {Rational((p_ + *d) / 2), Rational((p_ - *d) / 2)}) {
    if (x2 <= 0) continue;
    auto x = exact_root(x2, 2);
    if (!x) continue;
    QSqrt2 cand{*x, q_ / (2 * *x)};
    if (cand.sign() < 0) cand = -cand;
    if (cand * cand == *this) return cand;
  }
  return std::nullopt;
}

BigFloat QSqrt2::to_bigfloat(Precision prec) const {
  const Precision work = prec + kGuardBits;
  BigFloat s(2, work);
  mpfr_sqrt(s.raw(), s.raw(), MPFR_RNDN);
  BigFloat out = BigFloat(p_, work) + BigFloat(q_, work) * s;
  return out.rounded(prec);
}

std::size_t QSqrt2::decimal_digits() const {
  return std::max(mapconst::decimal_digits(p_), mapconst::decimal_digits(q_));
}

std::string QSqrt2::str() const {
  if (q_ == 0) return to_string(p_);
  const std::string irrational = to_string(abs(q_)) + "*sqrt2";
  if (p_ == 0) return (q_ < 0 ? "-" : "") + irrational;
  return to_string(p_) + (q_ < 0 ? "-" : "+") + irrational;
}

QSqrt2 QSqrt2::parse(std::string_view text) {
  constexpr std::string_view kSuffix = "*sqrt2";
  if (text.size() < kSuffix.size() || text.substr(text.size() - kSuffix.size()) != kSuffix) {
    return QSqrt2{parse_rational(text)};
  }
  const auto body = text.substr(0, text.size() - kSuffix.size());
  // The split point is the last sign that is not leading.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    if (body[i] == '+' || body[i] == '-') split = i;
  }
  if (split == std::string_view::npos) return QSqrt2{0, parse_rational(body)};
  Rational q = parse_rational(body.substr(split + 1));
  if (body[split] == '-') q = -q;
  return QSqrt2{parse_rational(body.substr(0, split)), q};
}

QSqrt2& QSqrt2::operator+=(const QSqrt2& o) {
  p_ += o.p_;
  q_ += o.q_;
  return *this;
}

QSqrt2& QSqrt2::operator-=(const QSqrt2& o) {
  p_ -= o.p_;
  q_ -= o.q_;
  return *this;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o) {
  Rational p = p_ * o.p_ + 2 * q_ * o.q_;
  Rational q = p_ * o.q_ + q_ * o.p_;
  p_ = std::move(p);
  q_ = std::move(q);
  return *this;
}

QSqrt2& QSqrt2::operator/=(const QSqrt2& o) {
  if (o.q_ == 0) {
    if (o.p_ == 0) throw DomainError("division by zero in Q(sqrt2)");
    p_ /= o.p_;
    q_ /= o.p_;
    return *this;
  }
  return *this *= o.inverse();
}

}  // namespace mapconst
