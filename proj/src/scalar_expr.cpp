#include "mapconst/scalar_expr.hpp"

#include <cctype>
#include <cstdlib>

#include "mapconst/errors.hpp"

namespace mapconst {

struct ScalarExpr::Node {
  enum class Kind { Literal, Add, Sub, Mul, Div, Neg, Sqrt, Pow };
  Kind kind = Kind::Literal;
  Rational literal;
  long exponent = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = ScalarExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Node::Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Node::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Node::Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Node::Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!accept('^')) return base;
    const bool paren = accept('(');
    const bool negative = accept('-');
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ - start > 6) fail("exponent too large");
    long e = std::strtol(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr, 10);
    if (paren) expect(')');
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Pow;
    n->lhs = std::move(base);
    n->exponent = negative ? -e : e;
    return n;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (text_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      expect('(');
      NodePtr inner = expr();
      expect(')');
      return make(Node::Kind::Sqrt, inner);
    }
    if (std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) return number();
    fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string digits(text_.substr(start, pos_ - start));
    mpz_class scale = 1;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      const std::size_t frac = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (frac == pos_) fail("expected digits after '.'");
      digits += text_.substr(frac, pos_ - frac);
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, pos_ - frac);
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Literal;
    n->literal = Rational(mpz_class(digits, 10), scale);
    n->literal.canonicalize();
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

BigFloat eval(const Node& n, Precision work) {
  switch (n.kind) {
    case Node::Kind::Literal:
      return BigFloat(n.literal, work);
    case Node::Kind::Add:
      return eval(*n.lhs, work) + eval(*n.rhs, work);
    case Node::Kind::Sub:
      return eval(*n.lhs, work) - eval(*n.rhs, work);
    case Node::Kind::Mul:
      return eval(*n.lhs, work) * eval(*n.rhs, work);
    case Node::Kind::Div: {
      BigFloat den = eval(*n.rhs, work);
      if (den.is_zero()) throw DomainError("division by zero");
      return eval(*n.lhs, work) / den;
    }
    case Node::Kind::Neg:
      return -eval(*n.lhs, work);
    case Node::Kind::Sqrt: {
      BigFloat arg = eval(*n.lhs, work);
      if (arg.sign() < 0) throw DomainError("square root of a negative value");
      return sqrt(arg);
    }
    case Node::Kind::Pow: {
      BigFloat base = eval(*n.lhs, work);
      if (base.is_zero() && n.exponent < 0) throw DomainError("division by zero");
      return pow(base, n.exponent);
    }
  }
  throw Error("corrupt expression node");
}

std::optional<QSqrt2> eval_exact(const Node& n) {
  auto binary = [&](auto op) -> std::optional<QSqrt2> {
    auto a = eval_exact(*n.lhs);
    auto b = eval_exact(*n.rhs);
    if (!a || !b) return std::nullopt;
    return op(*a, *b);
  };
  switch (n.kind) {
    case Node::Kind::Literal:
      return QSqrt2(n.literal);
    case Node::Kind::Add:
      return binary([](const QSqrt2& a, const QSqrt2& b) { return a + b; });
    case Node::Kind::Sub:
      return binary([](const QSqrt2& a, const QSqrt2& b) { return a - b; });
    case Node::Kind::Mul:
      return binary([](const QSqrt2& a, const QSqrt2& b) { return a * b; });
    case Node::Kind::Div:
      return binary([](const QSqrt2& a, const QSqrt2& b) {
        if (b.is_zero()) throw DomainError("division by zero");
        return a / b;
      });
    case Node::Kind::Neg: {
      auto a = eval_exact(*n.lhs);
      if (!a) return std::nullopt;
      return -*a;
    }
    case Node::Kind::Sqrt: {
      auto a = eval_exact(*n.lhs);
      if (!a) return std::nullopt;
      if (a->sign() < 0) throw DomainError("square root of a negative value");
      return a->sqrt();
    }
    case Node::Kind::Pow: {
      auto a = eval_exact(*n.lhs);
      if (!a) return std::nullopt;
      if (a->is_zero() && n.exponent < 0) throw DomainError("division by zero");
      return a->pow(n.exponent);
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace

ScalarExpr::ScalarExpr(std::string text, std::shared_ptr<const Node> root)
    : text_(std::move(text)), root_(std::move(root)) {}

ScalarExpr ScalarExpr::parse(std::string_view text) {
  Parser p(text);
  return ScalarExpr(std::string(text), p.parse());
}

ScalarExpr ScalarExpr::from_integer(long value) { return parse(std::to_string(value)); }

BigFloat ScalarExpr::evaluate(Precision prec) const {
  // An exact value, when available, is converted with a single rounding.
  if (auto exact = exact_qsqrt2()) return exact->to_bigfloat(prec);
  return eval(*root_, prec + kGuardBits).rounded(prec);
}

std::optional<QSqrt2> ScalarExpr::exact_qsqrt2() const { return eval_exact(*root_); }

std::optional<Rational> ScalarExpr::exact_rational() const {
  auto v = exact_qsqrt2();
  if (!v || !v->is_rational()) return std::nullopt;
  return v->rational_part();
}

BigFloat parse_scalar(std::string_view expr, Precision prec) { return ScalarExpr::parse(expr).evaluate(prec); }

}  // namespace mapconst
