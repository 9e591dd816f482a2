#pragma once

#include <mpfr.h>

#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>
#include <utility>

namespace hypheat {

/// Real scalar carrying its own binary precision (an owning wrapper over an
/// mpfr_t). Binary operations round to the larger operand precision; a double
/// operand is exact and adopts the precision of the other side.
class BigReal {
public:
  static constexpr int kDefaultBits = 128;

  BigReal() : BigReal(0.0, kDefaultBits) {}
  explicit BigReal(double v, int bits = kDefaultBits);
  BigReal(const std::string& decimal, int bits);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  /// Copy of `other` rounded to `bits`.
  BigReal(const BigReal& other, int bits);
  ~BigReal();

  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  BigReal& operator=(double v);

  int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  /// Decimal rendering with `digits` significant digits (0 = all digits the
  /// precision supports).
  std::string to_string(int digits = 0) const;

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  /// Binary exponent e with 0.5 <= |x| / 2^e < 1 (0 for zero).
  long exponent() const { return is_zero() ? 0 : mpfr_get_exp(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);
  BigReal& operator+=(double o);
  BigReal& operator-=(double o);
  BigReal& operator*=(double o);
  BigReal& operator/=(double o);

  BigReal operator-() const;

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const BigReal& a, double b) { return mpfr_cmp_d(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
  friend std::partial_ordering operator<=>(const BigReal& a, double b);

private:
  mpfr_t v_;
};

BigReal operator+(BigReal a, const BigReal& b);
BigReal operator-(BigReal a, const BigReal& b);
BigReal operator*(BigReal a, const BigReal& b);
BigReal operator/(BigReal a, const BigReal& b);
BigReal operator+(BigReal a, double b);
BigReal operator-(BigReal a, double b);
BigReal operator*(BigReal a, double b);
BigReal operator/(BigReal a, double b);
BigReal operator+(double a, BigReal b);
BigReal operator-(double a, BigReal b);
BigReal operator*(double a, BigReal b);
BigReal operator/(double a, const BigReal& b);

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal expm1(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log1p(const BigReal& x);
BigReal log10(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal sinh(const BigReal& x);
BigReal cosh(const BigReal& x);
BigReal tanh(const BigReal& x);
BigReal asinh(const BigReal& x);
BigReal acosh(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
BigReal pow(const BigReal& x, const BigReal& y);
BigReal pow(const BigReal& x, double y);
BigReal pow(const BigReal& x, int n);
BigReal tgamma(const BigReal& x);
BigReal lgamma(const BigReal& x);
BigReal digamma(const BigReal& x);
BigReal floor(const BigReal& x);
BigReal ldexp(const BigReal& x, long e);
BigReal fma(const BigReal& a, const BigReal& b, const BigReal& c);

BigReal const_pi(int bits);
BigReal const_ln2(int bits);
BigReal const_euler(int bits);

inline double to_double(const BigReal& x) { return x.to_double(); }

}  // namespace hypheat
