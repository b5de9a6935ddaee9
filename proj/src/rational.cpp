#include "mapconst/rational.hpp"

#include <algorithm>
#include <cctype>

#include "mapconst/errors.hpp"

namespace mapconst {
namespace {

bool is_integer_text(std::string_view text) {
  std::size_t i = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  if (i == text.size()) return false;
  return std::all_of(text.begin() + static_cast<std::ptrdiff_t>(i), text.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

std::optional<mpz_class> exact_root(const mpz_class& z, unsigned long n) {
  if (z < 0) {
    if (n % 2 == 0) return std::nullopt;
    auto r = exact_root(mpz_class(-z), n);
    if (!r) return std::nullopt;
    return mpz_class(-*r);
  }
  mpz_class out;
  if (mpz_root(out.get_mpz_t(), z.get_mpz_t(), n) == 0) return std::nullopt;
  return out;
}

}  // namespace

Rational ratio(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  const auto den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_text(num)) throw ParseError("invalid rational '" + std::string(text) + "'", 0);
  if (!is_integer_text(den) || den[0] == '-' || den[0] == '+') {
    throw ParseError("invalid rational '" + std::string(text) + "'", slash + 1);
  }
  mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", slash + 1);
  Rational out(n, d);
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::optional<Rational> exact_root(const Rational& r, unsigned long n) {
  if (n == 0) return std::nullopt;
  auto num = exact_root(r.get_num(), n);
  auto den = exact_root(r.get_den(), n);
  if (!num || !den) return std::nullopt;
  Rational out(*num, *den);
  out.canonicalize();
  return out;
}

std::size_t decimal_digits(const Rational& r) {
  return std::max(mpz_sizeinbase(r.get_num_mpz_t(), 10), mpz_sizeinbase(r.get_den_mpz_t(), 10));
}

Rational binomial(const Rational& x, unsigned m) {
  Rational out = 1;
  for (unsigned i = 0; i < m; ++i) {
    out *= (x - i);
    out /= (i + 1);
  }
  return out;
}

}  // namespace mapconst
