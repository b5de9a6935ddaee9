#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mapconst/bigfloat.hpp"
#include "mapconst/map_spec.hpp"
#include "mapconst/qsqrt2.hpp"
#include "mapconst/rational.hpp"
#include "mapconst/scalar_expr.hpp"

namespace mapconst {

/// Resource caps for iteration.
struct EngineLimits {
  std::uint64_t max_steps = 200'000'000;
  /// Decimal digits of the larger of numerator and denominator in exact mode.
  std::size_t max_digits = 10'000'000;
};

/// Numeric stepping at a fixed precision with preallocated scratch space.
///
/// Each step is evaluated with kGuardBits extra bits by a hand-written kernel
/// and rounded once, so the result is within 2^(1-P) relative of the exact
/// image of the (rounded) input.
class Stepper {
 public:
  /// `x0` is required for maps whose step depends on the initial condition.
  Stepper(const MapSpec& map, Precision prec, const std::optional<BigFloat>& x0 = std::nullopt);

  /// Replaces x_k by x_{k+1}. Throws DomainError or PoleError labelled with k.
  void advance(BigFloat& x, std::uint64_t k);
  /// Throws DomainError labelled with k unless x lies in the map domain.
  void check_domain(const BigFloat& x, std::uint64_t k) const;

  Precision precision() const { return prec_; }

 private:
  [[noreturn]] void pole(std::uint64_t k) const;

  const MapSpec* map_;
  Precision prec_;
  BigFloat t1_, t2_;
  BigFloat a_, x0_;
  std::optional<BigFloat> lower_, upper_;
  NumericStep generic_;
};

/// One application of the step at precision `prec`.
BigFloat step(const MapSpec& map, const BigFloat& x, Precision prec, const std::optional<BigFloat>& x0 = std::nullopt);

/// Final value plus the values at the requested checkpoints.
struct Trajectory {
  std::uint64_t steps = 0;
  BigFloat final_value;
  std::vector<std::pair<std::uint64_t, BigFloat>> checkpoints;

  /// Value at a recorded checkpoint. Throws std::out_of_range otherwise.
  const BigFloat& at(std::uint64_t k) const;
};

/// Applies the step N times starting from x0 at precision `prec`.
/// Checkpoints outside [0, N] are rejected with std::invalid_argument.
Trajectory iterate(const MapSpec& map, const ScalarExpr& x0, std::uint64_t n, Precision prec,
                   std::vector<std::uint64_t> checkpoints = {}, const EngineLimits& limits = {});

/// Exact iteration over F = Rational or QSqrt2. Throws CapExceeded when the
/// digit cap is hit, PoleError on a vanishing denominator.
template <class F>
F iterate_exact(const MapSpec& map, const F& x0, std::uint64_t n, const EngineLimits& limits = {});

/// Exact values x_0..x_k. Stops early instead of throwing when the digit cap is hit.
template <class F>
struct ExactRun {
  std::vector<F> values;
  bool capped = false;

  std::uint64_t reached() const { return values.empty() ? 0 : values.size() - 1; }
};

template <class F>
ExactRun<F> run_exact(const MapSpec& map, const F& x0, std::uint64_t n, const EngineLimits& limits = {});

/// Unreduced exact value num/den.
struct ProjectiveValue {
  mpz_class num;
  mpz_class den;

  Rational value() const;
};

/// Exact equality by cross-multiplication.
bool same_value(const ProjectiveValue& a, const ProjectiveValue& b);

/// Fraction-free exact iteration: x_0..x_k as unreduced num/den pairs built
/// with integer arithmetic only (no gcd). Needs rational coefficients. Stops
/// early at the digit cap; throws PoleError on a vanishing denominator.
struct ProjectiveRun {
  std::vector<ProjectiveValue> values;
  bool capped = false;

  std::uint64_t reached() const { return values.empty() ? 0 : values.size() - 1; }
};

ProjectiveRun run_projective(const MapSpec& map, const Rational& x0, std::uint64_t n, const EngineLimits& limits = {});

}  // namespace mapconst
