#pragma once

// Precision policy, error types and the small amount of glue that lets the
// numerical code be written once for `double` and for `BigReal`.

#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "hypheat/bigreal.hpp"

namespace hypheat {

// ---------------------------------------------------------------------------
// Errors

class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Evaluation at a point where a term is singular (e.g. x = 0 with negative
/// sinh powers) and no limit path applies.
class SingularEvaluationError : public DomainError {
public:
  using DomainError::DomainError;
};

class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The requested tolerance needs more working precision than allowed.
class PrecisionError : public ConvergenceError {
public:
  PrecisionError(const std::string& what, int required_bits)
      : ConvergenceError(what + " (requires " + std::to_string(required_bits) + " bits)"),
        required_bits_(required_bits) {}
  int required_bits() const { return required_bits_; }

private:
  int required_bits_;
};

/// A density that must be positive came out nonpositive after convergence.
class CancellationError : public PrecisionError {
public:
  using PrecisionError::PrecisionError;
};

/// A series cannot reach the requested accuracy at this argument.
class AccuracyLossError : public ConvergenceError {
public:
  AccuracyLossError(const std::string& what, double suggested_cap)
      : ConvergenceError(what), suggested_cap_(suggested_cap) {}
  double suggested_cap() const { return suggested_cap_; }

private:
  double suggested_cap_;
};

// ---------------------------------------------------------------------------
// Precision policy

struct PrecisionPolicy {
  enum class Mode { fixed, automatic };

  Mode mode = Mode::automatic;
  int fixed_bits = 53;
  double target_rel_tol = 1e-12;
  /// Smallest time accepted by the oscillatory Hartman-Watson evaluators.
  double t_min = 0.1;
  /// Hard ceiling for automatic escalation.
  int max_bits = 4096;

  static PrecisionPolicy fixed(int bits, double tol = 1e-12) {
    PrecisionPolicy p;
    p.mode = Mode::fixed;
    p.fixed_bits = bits;
    p.target_rel_tol = tol;
    return p;
  }
  static PrecisionPolicy automatic(double tol = 1e-12) {
    PrecisionPolicy p;
    p.target_rel_tol = tol;
    return p;
  }

  PrecisionPolicy with_tol(double tol) const {
    PrecisionPolicy p = *this;
    p.target_rel_tol = tol;
    return p;
  }
  PrecisionPolicy with_t_min(double t) const {
    PrecisionPolicy p = *this;
    p.t_min = t;
    return p;
  }

  bool is_fixed() const { return mode == Mode::fixed; }

  int target_digits() const {
    return static_cast<int>(std::ceil(-std::log10(target_rel_tol)));
  }

  /// Bits for non-oscillatory work: double when the target leaves 5 guard
  /// digits inside 53 bits, otherwise target + 6 digits.
  int working_bits() const {
    if (is_fixed()) return fixed_bits;
    const int digits = target_digits() + 5;
    if (digits <= 15) return 53;
    return digits_to_bits(digits + 1);
  }

  /// Working decimal digits for an oscillatory integral at time parameter
  /// tau: 16 + ceil(pi^2 / (2 tau ln 10)) + target digits.
  int oscillatory_digits(double tau) const {
    const double cancel = std::numbers::pi * std::numbers::pi / (2.0 * tau * std::numbers::ln10);
    return 16 + static_cast<int>(std::ceil(cancel)) + target_digits();
  }

  int oscillatory_bits(double tau) const {
    if (is_fixed()) return fixed_bits;
    return digits_to_bits(oscillatory_digits(tau));
  }

  static int digits_to_bits(double digits) {
    return static_cast<int>(std::ceil(digits * 3.3219280948873623)) + 4;
  }
  static double bits_to_digits(int bits) { return bits * 0.30102999566398120; }
};

// ---------------------------------------------------------------------------
// Scalar glue

template <class R>
concept Scalar = std::same_as<R, double> || std::same_as<R, BigReal>;

namespace sc {
using std::abs;
using std::acosh;
using std::asinh;
using std::atan2;
using std::cos;
using std::cosh;
using std::exp;
using std::expm1;
using std::floor;
using std::ldexp;
using std::lgamma;
using std::log;
using std::log10;
using std::log1p;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tanh;
using std::tgamma;
using hypheat::abs;
using hypheat::acosh;
using hypheat::asinh;
using hypheat::atan2;
using hypheat::cos;
using hypheat::cosh;
using hypheat::exp;
using hypheat::expm1;
using hypheat::floor;
using hypheat::ldexp;
using hypheat::lgamma;
using hypheat::log;
using hypheat::log10;
using hypheat::log1p;
using hypheat::pow;
using hypheat::sin;
using hypheat::sinh;
using hypheat::sqrt;
using hypheat::tanh;
using hypheat::tgamma;

inline double to_double(double x) { return x; }
using hypheat::to_double;

inline double pow(double x, int n) { return std::pow(x, n); }
}  // namespace sc

/// A scalar of type R equal to `v`, carrying `bits` of precision when R is
/// BigReal.
template <Scalar R>
R make_real(double v, int bits) {
  if constexpr (std::same_as<R, double>) {
    (void)bits;
    return v;
  } else {
    return BigReal(v, bits);
  }
}

template <Scalar R>
int bits_of(const R& x) {
  if constexpr (std::same_as<R, double>) {
    (void)x;
    return 53;
  } else {
    return x.precision();
  }
}

template <Scalar R>
R pi_of(int bits) {
  if constexpr (std::same_as<R, double>) {
    (void)bits;
    return std::numbers::pi;
  } else {
    return const_pi(bits);
  }
}

inline BigReal to_big(double x, int bits) { return BigReal(x, bits); }
inline BigReal to_big(const BigReal& x, int bits) { return BigReal(x, bits); }

/// Runs `f.template operator()<R>(bits)` with R = double when bits <= 53 and
/// R = BigReal otherwise; the result is returned as a BigReal.
template <class F>
BigReal with_scalar(int bits, F&& f) {
  if (bits <= 53) return to_big(f.template operator()<double>(53), 64);
  return to_big(f.template operator()<BigReal>(bits), bits);
}

}  // namespace hypheat
