#pragma once

// Exact term algebra for iterated operators -(1/sinh x) d/dx and
// -(1/sinh(x/2)) d/dx applied to Gaussian-type seeds.
//
// A term is coeff * x^a * t^{-q} * sinh(x/2)^b * cosh(x/2)^c * exp(-x^2/(2t)).

#include <gmpxx.h>

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "hypheat/scalar.hpp"

namespace hypheat::symop {

struct TermKey {
  int a = 0;
  int q = 0;
  int b = 0;
  int c = 0;
  auto operator<=>(const TermKey&) const = default;
};

struct HypTerm {
  mpq_class coeff;
  int a = 0;
  int q = 0;
  int b = 0;
  int c = 0;

  TermKey key() const { return {a, q, b, c}; }
};

/// Canonical sum of terms: unique keys in ascending (a, q, b, c) order,
/// no zero coefficients.
class TermSum {
public:
  TermSum() = default;
  explicit TermSum(const std::vector<HypTerm>& terms);

  void add(const HypTerm& t);
  void add(const TermSum& other);

  std::vector<HypTerm> terms() const;
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::map<TermKey, mpq_class>& raw() const { return terms_; }

  bool operator==(const TermSum& other) const { return terms_ == other.terms_; }

  /// Human-readable form, one term per line:
  /// `coeff * x^a * t^-q * sh^b * ch^c * G`.
  std::string to_string() const;

private:
  std::map<TermKey, mpq_class> terms_;
};

TermSum canonicalize(const std::vector<HypTerm>& terms);

/// exp(-x^2/(2t)).
TermSum seed_gaussian();
/// x exp(-x^2/(2t)) / sinh x = (1/2) x sh^{-1} ch^{-1} G.
TermSum seed_even_dim();

/// d/dx of a term sum.
TermSum differentiate(const TermSum& ts);
/// (-(1/sinh x) d/dx)^times.
TermSum apply_d_full(const TermSum& ts, int times);
/// (-(1/sinh(x/2)) d/dx)^times.
TermSum apply_d_half(const TermSum& ts, int times);

/// Coefficients converted once, for repeated evaluation.
class TermEvaluator {
public:
  TermEvaluator() = default;
  explicit TermEvaluator(const TermSum& ts);

  const TermSum& terms() const { return ts_; }
  bool singular_at_zero() const { return singular_at_zero_; }

  /// Sum of all terms at (x, t) in the scalar type R; `loss_digits` receives
  /// log10(max |term| / |sum|).
  template <Scalar R>
  R eval(const R& x, const R& t, int bits, double* loss_digits = nullptr) const;

  /// Evaluation at x > 0 to relative accuracy `rel_tol`: double first, then
  /// BigReal at the precision the observed cancellation demands. At x = 0 with
  /// singular terms the limit is taken by evaluating at x = 2^-40 (the
  /// kernels are even and analytic in x, so the error is O(x^2)).
  BigReal eval_auto(double x, double t, double rel_tol, int max_bits = 4096) const;
  double eval_double(double x, double t, double rel_tol = 1e-13) const;

private:
  TermSum ts_;
  std::vector<HypTerm> list_;
  std::vector<double> coeff_d_;
  bool singular_at_zero_ = false;
};

/// Sum at working precision; x = 0 with singular terms raises
/// SingularEvaluationError.
BigReal eval_termsum(const TermSum& ts, double x, double t, const PrecisionPolicy& prec);

/// eval_termsum with the x -> 0 limit path enabled.
BigReal eval_termsum_limit(const TermSum& ts, double x, double t, const PrecisionPolicy& prec);

// ---------------------------------------------------------------------------

template <Scalar R>
R TermEvaluator::eval(const R& x, const R& t, int bits, double* loss_digits) const {
  using sc::exp;
  using sc::pow;
  using sc::sinh;
  using sc::cosh;
  const R half = x * 0.5;
  const R sh = sinh(half);
  const R ch = cosh(half);
  const R g = exp(-(x * x) / (t * 2.0));
  const R inv_t = 1.0 / t;
  R sum = make_real<R>(0.0, bits);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < list_.size(); ++i) {
    const auto& tm = list_[i];
    R c = make_real<R>(0.0, bits);
    if constexpr (std::same_as<R, double>) {
      c = coeff_d_[i];
    } else {
      mpfr_set_q(c.raw(), tm.coeff.get_mpq_t(), MPFR_RNDN);
    }
    R term = c;
    if (tm.a != 0) term *= pow(x, tm.a);
    if (tm.q != 0) term *= pow(inv_t, tm.q);
    if (tm.b != 0) term *= pow(sh, tm.b);
    if (tm.c != 0) term *= pow(ch, tm.c);
    max_abs = std::max(max_abs, std::fabs(sc::to_double(term)));
    sum += term;
  }
  if (loss_digits) {
    const double s = std::fabs(sc::to_double(sum));
    *loss_digits = (max_abs == 0.0) ? 0.0 : (s > 0.0 ? std::max(0.0, std::log10(max_abs / s)) : 400.0);
  }
  return sum * g;
}

}  // namespace hypheat::symop
