#include "mapconst/coeff_poly.hpp"

#include <algorithm>

namespace mapconst {

CoefficientPoly::CoefficientPoly(QSqrt2 constant) {
  if (!constant.is_zero()) coeffs_.push_back(std::move(constant));
}

CoefficientPoly::CoefficientPoly(std::vector<QSqrt2> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

CoefficientPoly CoefficientPoly::symbol() { return CoefficientPoly(std::vector<QSqrt2>{0, 1}); }

QSqrt2 CoefficientPoly::coefficient(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return {};
  return coeffs_[static_cast<std::size_t>(i)];
}

BigFloat CoefficientPoly::evaluate(const BigFloat& c, Precision prec) const {
  const Precision work = prec + kGuardBits;
  BigFloat acc(work);
  const BigFloat x = c.rounded(work);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += it->to_bigfloat(work);
  }
  return acc.rounded(prec);
}

CoefficientPoly CoefficientPoly::derivative() const {
  std::vector<QSqrt2> out;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) out.push_back(coeffs_[i] * QSqrt2(static_cast<long>(i)));
  return CoefficientPoly(std::move(out));
}

CoefficientPoly CoefficientPoly::scaled_argument(const QSqrt2& s) const {
  std::vector<QSqrt2> out = coeffs_;
  QSqrt2 power = 1;
  for (auto& c : out) {
    c *= power;
    power *= s;
  }
  return CoefficientPoly(std::move(out));
}

std::string CoefficientPoly::str(const std::string& var) const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const QSqrt2& c = coeffs_[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    std::string text = c.str();
    const bool compound = c.rational_part() != 0 && c.sqrt2_part() != 0;
    bool negative = false;
    if (!compound && !text.empty() && text[0] == '-') {
      negative = true;
      text.erase(0, 1);
    }
    if (compound) text = "(" + text + ")";
    std::string monomial;
    if (i == 0) {
      monomial = text;
    } else {
      monomial = (text == "1" ? "" : text + "*") + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    if (out.empty()) {
      out = (negative ? "-" : "") + monomial;
    } else {
      out += (negative ? " - " : " + ") + monomial;
    }
  }
  return out;
}

CoefficientPoly& CoefficientPoly::operator+=(const CoefficientPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

CoefficientPoly& CoefficientPoly::operator-=(const CoefficientPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

CoefficientPoly& CoefficientPoly::operator*=(const CoefficientPoly& o) {
  if (coeffs_.empty() || o.coeffs_.empty()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<QSqrt2> out(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  coeffs_ = std::move(out);
  trim();
  return *this;
}

CoefficientPoly& CoefficientPoly::operator*=(const QSqrt2& s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

void CoefficientPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

}  // namespace mapconst
