#include "mapconst/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mapconst/errors.hpp"

namespace mapconst {
namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

std::string describe(const BigFloat& x) { return x.is_finite() ? x.to_scientific(20) : std::string("non-finite"); }

std::size_t digits(const Rational& x) { return decimal_digits(x); }
std::size_t digits(const QSqrt2& x) { return x.decimal_digits(); }

bool exact_in_domain(const Interval& d, const Rational& x) { return in_domain(d, QSqrt2(x)); }
bool exact_in_domain(const Interval& d, const QSqrt2& x) { return in_domain(d, x); }

std::string describe(const Rational& x) {
  return digits(x) > 40 ? "rational with " + std::to_string(digits(x)) + " digits" : to_string(x);
}
std::string describe(const QSqrt2& x) {
  return x.decimal_digits() > 40 ? "value with " + std::to_string(x.decimal_digits()) + " digits" : x.str();
}

template <class F>
F exact_step(const MapSpec& map, const ExactStep<F>& fn, const F& x, std::uint64_t k) {
  if (!exact_in_domain(map.domain, x)) {
    throw DomainError(map.id + ": iterate " + describe(x) + " outside domain " + map.domain.str(), k);
  }
  F den = fn.denominator_at(x);
  if (den == F(0)) throw PoleError(map.id + ": pole of the step function", k);
  F num = fn.numerator_at(x);
  num /= den;
  return num;
}

template <class F>
ExactRun<F> run_exact_impl(const MapSpec& map, const F& x0, std::uint64_t n, const EngineLimits& limits,
                           bool throw_on_cap) {
  if (n > limits.max_steps) throw CapExceeded("N = " + std::to_string(n) + " exceeds the step cap");
  const ExactStep<F> fn = instantiate_exact(map, x0);
  ExactRun<F> run;
  run.values.reserve(std::min<std::uint64_t>(n + 1, 1u << 16));
  run.values.push_back(x0);
  for (std::uint64_t k = 0; k < n; ++k) {
    F next = exact_step(map, fn, run.values.back(), k);
    if (digits(next) > limits.max_digits) {
      if (throw_on_cap) {
        throw CapExceeded(map.id + ": exact iterate " + std::to_string(k + 1) + " exceeds " +
                          std::to_string(limits.max_digits) + " digits");
      }
      run.capped = true;
      return run;
    }
    run.values.push_back(std::move(next));
  }
  if (!exact_in_domain(map.domain, run.values.back())) {
    throw DomainError(map.id + ": iterate " + describe(run.values.back()) + " outside domain " + map.domain.str(), n);
  }
  return run;
}

}  // namespace

Stepper::Stepper(const MapSpec& map, Precision prec, const std::optional<BigFloat>& x0)
    : map_(&map),
      prec_(prec),
      t1_(prec + kGuardBits),
      t2_(prec + kGuardBits),
      a_(prec + kGuardBits),
      x0_(prec + kGuardBits) {
  if (prec < MPFR_PREC_MIN) throw std::invalid_argument("precision too small");
  const Precision work = prec + kGuardBits;
  if (map.uses_a) a_ = map.a->evaluate(work);
  if (map.uses_x0) {
    if (!x0) throw std::invalid_argument("map '" + map.id + "' needs the initial condition x0");
    x0_ = x0->rounded(work);
  }
  if (map.domain.lower) lower_ = map.domain.lower->evaluate(4 * prec);
  if (map.domain.upper) upper_ = map.domain.upper->evaluate(4 * prec);
  if (map.kernel == Kernel::Generic) generic_ = instantiate_numeric(map, x0 ? *x0 : BigFloat(prec), work);
}

void Stepper::check_domain(const BigFloat& x, std::uint64_t k) const {
  bool ok = x.is_finite();
  if (ok && lower_) {
    const int c = mpfr_cmp(x.raw(), lower_->raw());
    ok = c > 0 || (c == 0 && map_->domain.lower_closed);
  }
  if (ok && upper_) {
    const int c = mpfr_cmp(x.raw(), upper_->raw());
    ok = c < 0 || (c == 0 && map_->domain.upper_closed);
  }
  if (!ok) throw DomainError(map_->id + ": iterate " + describe(x) + " outside domain " + map_->domain.str(), k);
}

void Stepper::pole(std::uint64_t k) const { throw PoleError(map_->id + ": pole of the step function", k); }

void Stepper::advance(BigFloat& x, std::uint64_t k) {
  check_domain(x, k);
  mpfr_ptr t1 = t1_.raw();
  mpfr_ptr t2 = t2_.raw();
  mpfr_srcptr v = x.raw();
  switch (map_->kernel) {
    case Kernel::M1:
      mpfr_si_sub(t1, 1, v, kRnd);
      mpfr_sqr(t1, t1, kRnd);
      mpfr_mul(t1, t1, v, kRnd);
      break;
    case Kernel::M2:
      mpfr_pow_ui(t1, v, 3, kRnd);
      mpfr_add_ui(t1, t1, 2, kRnd);
      mpfr_div_ui(t1, t1, 3, kRnd);
      break;
    case Kernel::M3:
      mpfr_sqr(t1, v, kRnd);
      mpfr_si_sub(t1, 1, t1, kRnd);
      mpfr_mul(t1, t1, v, kRnd);
      break;
    case Kernel::M4:
      if (mpfr_zero_p(v)) pole(k);
      mpfr_div(t1, a_.raw(), v, kRnd);
      mpfr_add(t1, t1, v, kRnd);
      break;
    case Kernel::M5:
      if (mpfr_zero_p(v)) pole(k);
      mpfr_sqr(t1, v, kRnd);
      mpfr_ui_div(t1, 1, t1, kRnd);
      mpfr_add(t1, t1, v, kRnd);
      break;
    case Kernel::Square:
      mpfr_sqr(t1, v, kRnd);
      break;
    case Kernel::Rcf:
      mpfr_mul(t1, x0_.raw(), v, kRnd);
      mpfr_add_ui(t1, t1, 1, kRnd);
      if (mpfr_zero_p(t1)) pole(k);
      mpfr_div(t1, v, t1, kRnd);
      break;
    case Kernel::Cf:
      if (mpfr_zero_p(v)) pole(k);
      mpfr_ui_div(t1, 1, v, kRnd);
      mpfr_add(t1, t1, x0_.raw(), kRnd);
      break;
    case Kernel::Bcf:
      if (mpfr_zero_p(v)) pole(k);
      mpfr_ui_div(t1, 1, v, kRnd);
      mpfr_add(t1, t1, x0_.raw(), kRnd);
      mpfr_div(t1, t1, v, kRnd);
      mpfr_add(t1, t1, x0_.raw(), kRnd);
      break;
    case Kernel::Ns2:
      if (mpfr_zero_p(v)) pole(k);
      mpfr_ui_div(t1, 1, v, kRnd);
      mpfr_div_2ui(t2, v, 1, kRnd);
      mpfr_add(t1, t1, t2, kRnd);
      break;
    case Kernel::Ns3:
      if (mpfr_zero_p(v)) pole(k);
      mpfr_ui_div(t1, 3, v, kRnd);
      mpfr_add(t1, t1, v, kRnd);
      mpfr_div_2ui(t1, t1, 1, kRnd);
      break;
    case Kernel::Dn2:
      mpfr_sqr(t1, v, kRnd);
      mpfr_set_ui(t2, 3, kRnd);
      mpfr_div_2ui(t2, t2, 1, kRnd);
      mpfr_sub(t1, t2, t1, kRnd);
      mpfr_mul(t1, t1, v, kRnd);
      break;
    case Kernel::Dn3:
      mpfr_sqr(t1, v, kRnd);
      mpfr_si_sub(t1, 1, t1, kRnd);
      mpfr_mul(t1, t1, v, kRnd);
      mpfr_mul_ui(t1, t1, 3, kRnd);
      mpfr_div_2ui(t1, t1, 1, kRnd);
      break;
    case Kernel::Ak:
      mpfr_sub_ui(t1, v, 1, kRnd);
      if (mpfr_zero_p(t1)) pole(k);
      mpfr_ui_div(t1, 1, t1, kRnd);
      mpfr_add(t1, t1, v, kRnd);
      mpfr_add_ui(t1, t1, 1, kRnd);
      break;
    case Kernel::Bk:
      if (mpfr_zero_p(v)) pole(k);
      mpfr_ui_div(t1, 1, v, kRnd);
      mpfr_add(t1, t1, v, kRnd);
      mpfr_add_ui(t1, t1, 1, kRnd);
      break;
    case Kernel::Logistic:
      mpfr_si_sub(t1, 1, v, kRnd);
      mpfr_mul(t1, t1, v, kRnd);
      break;
    case Kernel::Generic: {
      mpfr_set_zero(t2, 1);
      for (auto it = generic_.denominator.rbegin(); it != generic_.denominator.rend(); ++it) {
        mpfr_mul(t2, t2, v, kRnd);
        mpfr_add(t2, t2, it->raw(), kRnd);
      }
      if (mpfr_zero_p(t2)) pole(k);
      mpfr_set_zero(t1, 1);
      for (auto it = generic_.numerator.rbegin(); it != generic_.numerator.rend(); ++it) {
        mpfr_mul(t1, t1, v, kRnd);
        mpfr_add(t1, t1, it->raw(), kRnd);
      }
      mpfr_div(t1, t1, t2, kRnd);
      break;
    }
  }
  if (x.precision() != prec_) mpfr_set_prec(x.raw(), prec_);
  mpfr_set(x.raw(), t1, kRnd);
  if (!x.is_finite()) pole(k);
}

BigFloat step(const MapSpec& map, const BigFloat& x, Precision prec, const std::optional<BigFloat>& x0) {
  Stepper s(map, prec, x0);
  BigFloat out = x.rounded(prec);
  s.advance(out, 0);
  return out;
}

const BigFloat& Trajectory::at(std::uint64_t k) const {
  for (const auto& [index, value] : checkpoints) {
    if (index == k) return value;
  }
  throw std::out_of_range("no checkpoint at k=" + std::to_string(k));
}

Trajectory iterate(const MapSpec& map, const ScalarExpr& x0, std::uint64_t n, Precision prec,
                   std::vector<std::uint64_t> checkpoints, const EngineLimits& limits) {
  if (n > limits.max_steps) {
    throw CapExceeded("N = " + std::to_string(n) + " exceeds the step cap " + std::to_string(limits.max_steps));
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (!checkpoints.empty() && checkpoints.back() > n) {
    throw std::invalid_argument("checkpoint " + std::to_string(checkpoints.back()) + " beyond N");
  }
  BigFloat x = x0.evaluate(prec);
  Stepper stepper(map, prec, x);
  Trajectory out;
  out.steps = n;
  auto next_cp = checkpoints.begin();
  for (std::uint64_t k = 0; k < n; ++k) {
    if (next_cp != checkpoints.end() && *next_cp == k) {
      stepper.check_domain(x, k);
      out.checkpoints.emplace_back(k, x);
      ++next_cp;
    }
    stepper.advance(x, k);
  }
  stepper.check_domain(x, n);
  if (next_cp != checkpoints.end()) out.checkpoints.emplace_back(n, x);
  out.final_value = std::move(x);
  return out;
}

template <class F>
F iterate_exact(const MapSpec& map, const F& x0, std::uint64_t n, const EngineLimits& limits) {
  auto run = run_exact_impl(map, x0, n, limits, true);
  return std::move(run.values.back());
}

template <class F>
ExactRun<F> run_exact(const MapSpec& map, const F& x0, std::uint64_t n, const EngineLimits& limits) {
  return run_exact_impl(map, x0, n, limits, false);
}

template Rational iterate_exact(const MapSpec&, const Rational&, std::uint64_t, const EngineLimits&);
template QSqrt2 iterate_exact(const MapSpec&, const QSqrt2&, std::uint64_t, const EngineLimits&);
template ExactRun<Rational> run_exact(const MapSpec&, const Rational&, std::uint64_t, const EngineLimits&);
template ExactRun<QSqrt2> run_exact(const MapSpec&, const QSqrt2&, std::uint64_t, const EngineLimits&);

Rational ProjectiveValue::value() const {
  Rational out(num, den);
  out.canonicalize();
  return out;
}

bool same_value(const ProjectiveValue& a, const ProjectiveValue& b) {
  mpz_class lhs = a.num * b.den;
  mpz_class rhs = b.num * a.den;
  return lhs == rhs;
}

ProjectiveRun run_projective(const MapSpec& map, const Rational& x0, std::uint64_t n, const EngineLimits& limits) {
  if (n > limits.max_steps) throw CapExceeded("N = " + std::to_string(n) + " exceeds the step cap");
  const ExactStep<Rational> fn = instantiate_exact(map, x0);
  // Clear denominators so that the homogenized polynomials have integer coefficients.
  mpz_class scale = 1;
  for (const auto* coeffs : {&fn.numerator, &fn.denominator}) {
    for (const auto& c : *coeffs) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());
  }
  auto integer_coeffs = [&](const std::vector<Rational>& coeffs) {
    std::vector<mpz_class> out;
    for (const auto& c : coeffs) out.emplace_back(c.get_num() * (scale / c.get_den()));
    return out;
  };
  const std::vector<mpz_class> num = integer_coeffs(fn.numerator);
  const std::vector<mpz_class> den = integer_coeffs(fn.denominator);
  const std::size_t degree = std::max(num.size(), den.size()) - 1;

  ProjectiveRun run;
  run.values.push_back(ProjectiveValue{x0.get_num(), x0.get_den()});
  std::vector<mpz_class> p_pow(degree + 1);
  std::vector<mpz_class> q_pow(degree + 1);
  for (std::uint64_t k = 0; k < n; ++k) {
    const ProjectiveValue& x = run.values.back();
    p_pow[0] = 1;
    q_pow[0] = 1;
    for (std::size_t i = 1; i <= degree; ++i) {
      p_pow[i] = p_pow[i - 1] * x.num;
      q_pow[i] = q_pow[i - 1] * x.den;
    }
    auto homogeneous = [&](const std::vector<mpz_class>& coeffs) {
      mpz_class acc = 0;
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0) acc += coeffs[i] * p_pow[i] * q_pow[degree - i];
      }
      return acc;
    };
    ProjectiveValue next{homogeneous(num), homogeneous(den)};
    if (next.den == 0) throw PoleError(map.id + ": pole of the step function", k);
    if (next.den < 0) {
      next.num = -next.num;
      next.den = -next.den;
    }
    const std::size_t size = std::max(mpz_sizeinbase(next.num.get_mpz_t(), 10), mpz_sizeinbase(next.den.get_mpz_t(), 10));
    if (size > limits.max_digits) {
      run.capped = true;
      return run;
    }
    run.values.push_back(std::move(next));
  }
  return run;
}

}  // namespace mapconst
